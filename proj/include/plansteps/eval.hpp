#pragma once

// First-error-identification chains, step-scoring judges and the F1 report.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "plansteps/pipeline.hpp"
#include "plansteps/taxonomy.hpp"

namespace plansteps::eval {

struct EvalChain {
  std::string chain_id;
  std::string problem_nl;
  std::vector<std::string> steps;
  std::optional<int> gold_first_error;  // 1-based
  std::vector<Category> gold_categories;
  std::string domain_id;
  std::string problem_id;
  std::uint64_t seed = 0;

  nlohmann::ordered_json to_json() const;
  static EvalChain from_json(const nlohmann::json& j);
};

struct ChainConfig {
  double error_fraction = 0.5;
  std::vector<Category> error_categories{Category::NonExecutable, Category::DeadEnd,
                                         Category::Backtracking};
  std::uint64_t seed = 0;
  std::string template_dir;
  SearchLimits limits;

  nlohmann::ordered_json to_json() const;
};

struct SkippedInstance {
  std::string domain_id;
  std::string problem_id;
  std::string reason;
};

struct ChainSet {
  std::vector<EvalChain> chains;  // (domain, problem) order
  std::vector<SkippedInstance> skipped;
};

// One chain per instance. Error chains put the injected step at a position
// drawn uniformly among those that admit a candidate of a configured error
// category; the category is drawn uniformly among those available there, the
// action uniformly within it. Deterministic in config.seed for any worker count.
ChainSet build_eval_chains(const std::vector<pipeline::ProblemInstance>& instances,
                           const ChainConfig& config, int workers = 0);

// Categories of a step sequence replayed from the initial state: inapplicable
// steps (or nullopt, for text naming no action) leave the state unchanged,
// executable ones move to the successor, revisits included.
std::vector<Category> replay_categories(ActionEvaluator& evaluator,
                                        const std::vector<std::optional<ActionId>>& steps);

void write_chains(const std::filesystem::path& path, const std::vector<EvalChain>& chains);
std::vector<EvalChain> read_chains(const std::filesystem::path& path);

// One score per step per chain; a vector of the wrong length marks the chain
// invalid.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::vector<double>> score(const std::vector<EvalChain>& chains) = 0;
};

// Recovers actions from step text and scores each with its taxonomy reward.
std::unique_ptr<Judge> make_oracle_judge(std::vector<pipeline::ProblemInstance> instances,
                                         std::string template_dir = {}, SearchLimits limits = {});
std::unique_ptr<Judge> make_constant_judge(double value);
// Uniform [0, 1) scores seeded per chain id.
std::unique_ptr<Judge> make_random_judge(std::uint64_t seed);
// Runs `command` through /bin/sh, streaming one {chain_id, problem_nl, steps}
// request per line to its stdin and reading one {chain_id, scores} line per
// request from its stdout.
std::unique_ptr<Judge> make_subprocess_judge(std::string command);
// Precomputed {chain_id, scores} lines; chains missing from the file are invalid.
std::unique_ptr<Judge> make_scores_file_judge(const std::filesystem::path& path);

// "oracle", "const:<v>", "random[:seed]", otherwise a shell command.
std::unique_ptr<Judge> make_judge(const std::string& spec,
                                  const std::vector<pipeline::ProblemInstance>& instances,
                                  const std::string& template_dir = {});

nlohmann::ordered_json judge_request(const EvalChain& chain);

inline constexpr double kDefaultThreshold = 0.6;

struct Prediction {
  std::string chain_id;
  bool valid = true;
  std::optional<int> first_error;  // 1-based
};

// Smallest 1-based index with score < tau.
std::optional<int> first_below(const std::vector<double>& scores, double tau);

std::vector<Prediction> score_with_judge(const std::vector<EvalChain>& chains, Judge& judge,
                                         double tau = kDefaultThreshold);

// Harmonic mean of two percentages; 0 when both are 0.
double compute_f1(double error_acc, double correct_acc);

struct EvalReport {
  double error_acc = 0.0;    // percent of error chains whose first error is found exactly
  double correct_acc = 0.0;  // percent of clean chains predicted clean
  double f1 = 0.0;
  std::size_t error_chains = 0;
  std::size_t error_correct = 0;
  std::size_t clean_chains = 0;
  std::size_t clean_correct = 0;
  std::size_t invalid = 0;

  nlohmann::ordered_json to_json() const;
};

// An empty bucket has accuracy 0. Invalid predictions are counted and excluded.
EvalReport make_report(const std::vector<EvalChain>& chains, const std::vector<Prediction>& predictions);
std::string format_report(const EvalReport& report);

}  // namespace plansteps::eval
