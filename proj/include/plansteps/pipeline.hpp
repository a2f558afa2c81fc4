#pragma once

// Dataset generation along optimal trajectories, per-problem splits and
// corpus statistics.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "plansteps/forge.hpp"
#include "plansteps/pddl.hpp"
#include "plansteps/search.hpp"
#include "plansteps/taxonomy.hpp"

namespace plansteps::pipeline {

struct DomainConfig {
  int y = kDefaultCandidates;
  double p_inapp = kDefaultInapplicableProbability;
  forge::IntRange mopl_bounds{2, 15};
  forge::SizeParams size_params;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  int y = kDefaultCandidates;
  double p_inapp = kDefaultInapplicableProbability;
  std::string template_dir;  // empty: built-in templates
  SearchLimits limits;
  // Per-domain entries override the global values above field by field.
  std::map<std::string, nlohmann::json> domain_overrides;

  DomainConfig for_domain(const std::string& domain_id) const;

  nlohmann::ordered_json to_json() const;
  // Throws std::invalid_argument on unknown keys or ill-typed values.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::filesystem::path& path);
};

struct ProblemInstance {
  std::string domain_id;
  std::string problem_id;
  std::shared_ptr<const pddl::DomainDef> domain;
  pddl::ProblemDef problem;
};

// Reads `<dir>/domain.pddl` plus every other `*.pddl` as a problem, or, when
// dir has no domain file, each immediate subdirectory in name order.
std::vector<ProblemInstance> load_problem_dir(const std::filesystem::path& dir);

struct StepText {
  std::string text;
  double reward = 1.0;
};

struct DatasetRecord {
  std::string record_id;
  std::string domain_id;
  std::string problem_id;
  std::string problem_nl;
  std::vector<StepText> prefix_steps;
  std::string candidate_step;
  Category category = Category::NonExecutable;
  double reward = 0.0;
  int step_index = 0;
  std::uint64_t seed = 0;
  int optimal_cost = 0;
  int y = 0;
  double p_inapp = 0.0;
  ActionId candidate_action = -1;  // ordering key only; not serialized

  nlohmann::ordered_json to_json() const;
  static DatasetRecord from_json(const nlohmann::json& j);
};

// "problem:k:action(args)"
std::string make_record_id(const std::string& problem_id, int step_index,
                           const std::string& action_name);

struct DroppedInstance {
  std::string domain_id;
  std::string problem_id;
  std::string reason;
};

struct ProblemSummary {
  std::string domain_id;
  std::string problem_id;
  int optimal_cost = 0;
  std::size_t records = 0;
};

struct DatasetResult {
  std::vector<DatasetRecord> records;  // (domain, problem, step, action) order
  std::vector<ProblemSummary> problems;
  std::vector<DroppedInstance> dropped;
};

// Per-problem randomness root: independent of scheduling and of which other
// problems are in the batch.
std::uint64_t problem_seed(std::uint64_t master, const std::string& domain_id,
                           const std::string& problem_id);

// Walks the optimal trajectory of one instance and labels sampled candidates
// at every state. Throws nothing for planner trouble; it is reported in
// `dropped` instead.
DatasetResult generate_instance_records(const ProblemInstance& instance,
                                        const PipelineConfig& config);

// Reference implementation: one instance after another.
DatasetResult generate_dataset_serial(const std::vector<ProblemInstance>& instances,
                                      const PipelineConfig& config);
// OpenMP version; output is identical to the serial one for any worker count.
// workers <= 0 uses every available core.
DatasetResult generate_dataset(const std::vector<ProblemInstance>& instances,
                               const PipelineConfig& config, int workers = 0);

void write_records(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> read_records(const std::filesystem::path& path);

enum class Split { Train, Val, Test, Holdout };
std::string_view to_string(Split s);

struct SplitRatios {
  double train = 0.85;
  double val = 0.05;
  double test = 0.10;
};

struct ProblemKey {
  std::string domain_id;
  std::string problem_id;
  auto operator<=>(const ProblemKey&) const = default;
};

using SplitAssignment = std::map<ProblemKey, Split>;

// Seeded shuffle of the non-holdout problems followed by proportional
// assignment (val and test rounded to nearest, train takes the rest). Every
// problem of the holdout domain goes to Holdout. Throws std::invalid_argument
// for an unknown holdout domain or ratios not summing to 1.
SplitAssignment assign_splits(std::vector<ProblemKey> problems, const SplitRatios& ratios,
                              const std::string& holdout_domain, std::uint64_t seed);
SplitAssignment split(const std::vector<DatasetRecord>& records, const SplitRatios& ratios,
                      const std::string& holdout_domain, std::uint64_t seed);
void write_splits(const std::filesystem::path& path, const SplitAssignment& assignment);
SplitAssignment read_splits(const std::filesystem::path& path);

struct DomainRow {
  std::string domain_id;
  std::string display_name;
  std::size_t problems = 0;
  double mopl = 0.0;
  std::size_t total_steps = 0;
};

struct DomainStats {
  std::vector<DomainRow> rows;  // catalog order, unknown domains after
  DomainRow totals;
};

DomainStats stats(const std::vector<DatasetRecord>& records);
std::string format_stats(const DomainStats& stats);
nlohmann::ordered_json stats_to_json(const DomainStats& stats);

}  // namespace plansteps::pipeline
