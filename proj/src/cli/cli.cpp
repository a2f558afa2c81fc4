#include "plansteps/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <omp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "plansteps/eval.hpp"
#include "plansteps/forge.hpp"
#include "plansteps/manifest.hpp"
#include "plansteps/pipeline.hpp"

namespace plansteps::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// A flag value that parses but makes no sense; exits like a parse error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string log_level = "info";
};

pipeline::PipelineConfig load_config(const Common& c) {
  return c.config_path.empty() ? pipeline::PipelineConfig{} : pipeline::PipelineConfig::load(c.config_path);
}

int resolve_workers(int requested) { return requested > 0 ? requested : omp_get_num_procs(); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

fs::path sibling_with_suffix(const fs::path& input, const std::string& suffix) {
  fs::path out = input;
  out.replace_extension();
  return fs::path(out.string() + suffix);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

// File outputs may name a directory that does not exist yet.
void prepare_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void write_manifest(RunManifest& manifest, const fs::path& out, Clock::time_point start) {
  manifest.time_stage("total", Clock::now() - start);
  const fs::path path = manifest_path_for(out);
  manifest.write(path);
  spdlog::info("manifest written to {}", path.string());
}

// A path to a domain file, or the id of a built-in domain.
pddl::DomainDef load_domain(const std::string& spec) {
  if (fs::is_regular_file(spec)) return pddl::parse_domain(slurp(spec));
  if (forge::find_entry(spec)) return forge::domain_def(spec);
  throw UsageError(fmt::format("--domain: '{}' is neither a file nor a built-in domain", spec));
}

// ---------------------------------------------------------------- gen-problems

struct GenProblemsOptions {
  std::string out;
  int count = 50;
  std::string domains;
  std::uint64_t seed = 0;
  int workers = 0;
  bool seed_set = false;
};

int gen_problems(const Common& common, const GenProblemsOptions& o) {
  const auto start = Clock::now();
  auto config = load_config(common);
  if (o.seed_set) config.seed = o.seed;
  std::vector<std::string> domains = o.domains.empty() ? std::vector<std::string>{} : split_list(o.domains);
  if (domains.empty())
    for (const auto& e : forge::catalog()) domains.push_back(e.domain_id);
  for (const auto& d : domains)
    if (!forge::find_entry(d)) throw UsageError(fmt::format("--domains: unknown domain '{}'", d));
  if (fs::exists(o.out) && !(fs::is_directory(o.out) && fs::is_empty(o.out)))
    throw std::runtime_error(fmt::format("{} exists and is not an empty directory", o.out));

  struct Job {
    std::string domain_id;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (const auto& d : domains)
    for (int i = 0; i < o.count; ++i) jobs.push_back({d, static_cast<std::size_t>(i)});

  const int workers = resolve_workers(o.workers);
  std::vector<std::optional<forge::GeneratedInstance>> generated(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const auto dc = config.for_domain(jobs[i].domain_id);
      forge::GenerateOptions options;
      options.mopl_bounds = dc.mopl_bounds;
      generated[i] = forge::generate_instance(jobs[i].domain_id, dc.size_params,
                                              forge::instance_seed(config.seed, jobs[i].domain_id, jobs[i].index),
                                              options);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  bool failed = false;
  for (const auto& e : errors)
    if (!e.empty()) {
      spdlog::error("{}", e);
      failed = true;
    }
  if (failed) return kExitDomainError;
  const auto generated_at = Clock::now();

  RunManifest manifest("gen-problems");
  manifest.settings() = {{"seed", config.seed}, {"count", o.count}, {"domains", domains}, {"config", config.to_json()}};
  if (!common.config_path.empty()) manifest.add_input("config", common.config_path);
  auto& listing = manifest.section("instances") = nlohmann::ordered_json::array();

  fs::create_directories(o.out);
  for (const auto& d : domains) {
    fs::create_directories(fs::path(o.out) / d);
    write_text(fs::path(o.out) / d / "domain.pddl", std::string(forge::find_entry(d)->pddl_text));
  }
  for (const auto& g : generated) {
    write_text(fs::path(o.out) / g->domain_id / (g->problem.name + ".pddl"), g->text());
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : g->sampled_params) params[k] = v;
    listing.push_back({{"domain_id", g->domain_id},
                       {"problem_id", g->problem.name},
                       {"seed", g->seed},
                       {"optimal_cost", g->optimal_cost},
                       {"params", params}});
  }
  manifest.add_output("problems", o.out);
  manifest.runtime()["workers"] = workers;
  manifest.runtime()["out"] = o.out;
  manifest.time_stage("generate", generated_at - start);
  write_manifest(manifest, o.out, start);
  fmt::print("wrote {} problems in {} domains to {}\n", generated.size(), domains.size(), o.out);
  return kExitOk;
}

// ----------------------------------------------------------------- gen-dataset

struct GenDatasetOptions {
  std::string problems;
  std::string out;
  std::uint64_t seed = 0;
  int y = kDefaultCandidates;
  double p_inapp = kDefaultInapplicableProbability;
  int workers = 0;
  bool seed_set = false, y_set = false, p_inapp_set = false;
};

int gen_dataset(const Common& common, const GenDatasetOptions& o) {
  const auto start = Clock::now();
  auto config = load_config(common);
  if (o.seed_set) config.seed = o.seed;
  if (o.y_set) config.y = o.y;
  if (o.p_inapp_set) config.p_inapp = o.p_inapp;
  const int workers = resolve_workers(o.workers);

  auto instances = pipeline::load_problem_dir(o.problems);
  if (instances.empty()) spdlog::warn("no problems found under {}", o.problems);
  const auto loaded_at = Clock::now();
  auto result = pipeline::generate_dataset(instances, config, workers);
  const auto generated_at = Clock::now();
  prepare_output(o.out);
  pipeline::write_records(o.out, result.records);

  RunManifest manifest("gen-dataset");
  manifest.settings() = {{"seed", config.seed},
                         {"y", config.y},
                         {"p_inapp", config.p_inapp},
                         {"config", config.to_json()},
                         {"deduplication", "none"}};
  manifest.add_input("problems", o.problems);
  if (!common.config_path.empty()) manifest.add_input("config", common.config_path);
  manifest.add_output("dataset", o.out);
  manifest.section("summary") = {{"instances", instances.size()},
                                 {"records", result.records.size()},
                                 {"problems_with_records", result.problems.size()},
                                 {"dropped", result.dropped.size()}};
  auto& problems = manifest.section("problems") = nlohmann::ordered_json::array();
  for (const auto& p : result.problems)
    problems.push_back({{"domain_id", p.domain_id},
                        {"problem_id", p.problem_id},
                        {"optimal_cost", p.optimal_cost},
                        {"records", p.records}});
  auto& dropped = manifest.section("dropped") = nlohmann::ordered_json::array();
  for (const auto& d : result.dropped)
    dropped.push_back({{"domain_id", d.domain_id}, {"problem_id", d.problem_id}, {"reason", d.reason}});
  manifest.runtime()["workers"] = workers;
  manifest.runtime()["out"] = o.out;
  manifest.time_stage("load", loaded_at - start);
  manifest.time_stage("generate", generated_at - loaded_at);
  write_manifest(manifest, o.out, start);
  fmt::print("wrote {} records for {} problems ({} dropped) to {}\n", result.records.size(),
             result.problems.size(), result.dropped.size(), o.out);
  return kExitOk;
}

// ----------------------------------------------------------------------- split

struct SplitOptions {
  std::string records;
  std::string out;
  std::string holdout = std::string(forge::kHoldoutDomain);
  std::string ratios = "0.85,0.05,0.10";
  std::uint64_t seed = 0;
};

pipeline::SplitRatios parse_ratios(const std::string& text) {
  auto parts = split_list(text);
  if (parts.size() != 3) throw UsageError("--ratios expects three comma-separated numbers: train,val,test");
  try {
    pipeline::SplitRatios r{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
    if (r.train < 0 || r.val < 0 || r.test < 0 || std::abs(r.train + r.val + r.test - 1.0) > 1e-9)
      throw UsageError("--ratios must be non-negative and sum to 1");
    return r;
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("--ratios: cannot parse '{}'", text));
  }
}

int split_command(const Common&, const SplitOptions& o) {
  const auto start = Clock::now();
  if (!forge::find_entry(o.holdout)) throw UsageError(fmt::format("--holdout: unknown domain '{}'", o.holdout));
  const auto ratios = parse_ratios(o.ratios);
  const fs::path out = o.out.empty() ? sibling_with_suffix(o.records, ".splits.jsonl") : fs::path(o.out);
  auto records = pipeline::read_records(o.records);
  auto assignment = pipeline::split(records, ratios, o.holdout, o.seed);
  prepare_output(out);
  pipeline::write_splits(out, assignment);

  std::map<pipeline::Split, std::pair<std::size_t, std::size_t>> counts;  // problems, records
  for (const auto& [key, s] : assignment) ++counts[s].first;
  for (const auto& r : records) ++counts[assignment.at({r.domain_id, r.problem_id})].second;

  RunManifest manifest("split");
  manifest.settings() = {{"seed", o.seed},
                         {"holdout", o.holdout},
                         {"ratios", {{"train", ratios.train}, {"val", ratios.val}, {"test", ratios.test}}}};
  manifest.add_input("records", o.records);
  manifest.add_output("splits", out);
  auto& summary = manifest.section("summary") = nlohmann::ordered_json::object();
  for (pipeline::Split s : {pipeline::Split::Train, pipeline::Split::Val, pipeline::Split::Test,
                            pipeline::Split::Holdout}) {
    summary[std::string(pipeline::to_string(s))] = {{"problems", counts[s].first}, {"records", counts[s].second}};
    fmt::print("{:<8} {:>6} problems {:>9} records\n", pipeline::to_string(s), counts[s].first, counts[s].second);
  }
  manifest.runtime()["out"] = out.string();
  write_manifest(manifest, out, start);
  return kExitOk;
}

// ----------------------------------------------------------------------- stats

struct StatsOptions {
  std::string records;
  std::string splits;
  std::string split;
  std::string json_out;
};

int stats_command(const Common&, const StatsOptions& o) {
  const auto start = Clock::now();
  if (o.splits.empty() != o.split.empty()) throw UsageError("--splits and --split go together");
  auto records = pipeline::read_records(o.records);
  if (!o.splits.empty()) {
    auto assignment = pipeline::read_splits(o.splits);
    std::erase_if(records, [&](const pipeline::DatasetRecord& r) {
      auto it = assignment.find({r.domain_id, r.problem_id});
      return it == assignment.end() || pipeline::to_string(it->second) != o.split;
    });
  }
  const auto table = pipeline::stats(records);
  fmt::print("{}", pipeline::format_stats(table));
  if (o.json_out.empty()) return kExitOk;

  prepare_output(o.json_out);
  write_text(o.json_out, pipeline::stats_to_json(table).dump(2) + "\n");
  RunManifest manifest("stats");
  manifest.settings() = {{"split", o.split}};
  manifest.add_input("records", o.records);
  if (!o.splits.empty()) manifest.add_input("splits", o.splits);
  manifest.add_output("stats", o.json_out);
  manifest.runtime()["out"] = o.json_out;
  write_manifest(manifest, o.json_out, start);
  return kExitOk;
}

// ---------------------------------------------------------------- build-chains

struct ChainsOptions {
  std::string problems;
  std::string out;
  std::string splits;
  std::string split_names = "test,holdout";
  std::string categories = "non-executable,dead-end,backtracking";
  double error_fraction = 0.5;
  std::uint64_t seed = 0;
  int workers = 0;
};

int build_chains(const Common& common, const ChainsOptions& o) {
  const auto start = Clock::now();
  const auto config = load_config(common);
  eval::ChainConfig cc;
  cc.seed = o.seed;
  cc.error_fraction = o.error_fraction;
  cc.template_dir = config.template_dir;
  cc.limits = config.limits;
  cc.error_categories.clear();
  for (const auto& name : split_list(o.categories)) {
    auto c = category_from_string(name);
    if (!c || *c == Category::Optimal)
      throw UsageError(fmt::format("--error-categories: '{}' is not an error category", name));
    cc.error_categories.push_back(*c);
  }
  if (cc.error_categories.empty()) throw UsageError("--error-categories must name at least one category");

  auto instances = pipeline::load_problem_dir(o.problems);
  std::vector<std::string> wanted;
  if (!o.splits.empty()) {
    wanted = split_list(o.split_names);
    auto assignment = pipeline::read_splits(o.splits);
    std::erase_if(instances, [&](const pipeline::ProblemInstance& i) {
      auto it = assignment.find({i.domain_id, i.problem_id});
      return it == assignment.end() ||
             std::find(wanted.begin(), wanted.end(), pipeline::to_string(it->second)) == wanted.end();
    });
  }
  const int workers = resolve_workers(o.workers);
  auto set = eval::build_eval_chains(instances, cc, workers);
  prepare_output(o.out);
  eval::write_chains(o.out, set.chains);

  std::size_t with_error = 0;
  for (const auto& c : set.chains) with_error += c.gold_first_error.has_value();
  RunManifest manifest("build-chains");
  manifest.settings() = {{"chains", cc.to_json()}, {"splits", wanted}};
  manifest.add_input("problems", o.problems);
  if (!o.splits.empty()) manifest.add_input("splits", o.splits);
  if (!common.config_path.empty()) manifest.add_input("config", common.config_path);
  manifest.add_output("chains", o.out);
  manifest.section("summary") = {{"instances", instances.size()},
                                 {"chains", set.chains.size()},
                                 {"error_chains", with_error},
                                 {"clean_chains", set.chains.size() - with_error},
                                 {"skipped", set.skipped.size()}};
  auto& skipped = manifest.section("skipped") = nlohmann::ordered_json::array();
  for (const auto& s : set.skipped)
    skipped.push_back({{"domain_id", s.domain_id}, {"problem_id", s.problem_id}, {"reason", s.reason}});
  manifest.runtime()["workers"] = workers;
  manifest.runtime()["out"] = o.out;
  write_manifest(manifest, o.out, start);
  fmt::print("wrote {} chains ({} with an error, {} skipped) to {}\n", set.chains.size(), with_error,
             set.skipped.size(), o.out);
  return kExitOk;
}

// ------------------------------------------------------------------------ eval

struct EvalOptions {
  std::string chains;
  std::string judge;
  std::string scores;
  std::string problems;
  std::string out;
  double tau = eval::kDefaultThreshold;
};

int eval_command(const Common& common, const EvalOptions& o) {
  const auto start = Clock::now();
  const auto config = load_config(common);
  const fs::path out = o.out.empty() ? sibling_with_suffix(o.chains, ".report.json") : fs::path(o.out);
  auto chains = eval::read_chains(o.chains);
  std::unique_ptr<eval::Judge> judge;
  if (!o.scores.empty()) {
    judge = eval::make_scores_file_judge(o.scores);
  } else {
    std::vector<pipeline::ProblemInstance> instances;
    if (!o.problems.empty()) instances = pipeline::load_problem_dir(o.problems);
    if (o.judge == "oracle" && instances.empty()) throw UsageError("the oracle judge needs --problems");
    judge = eval::make_judge(o.judge, instances, config.template_dir);
  }
  auto predictions = eval::score_with_judge(chains, *judge, o.tau);
  auto report = eval::make_report(chains, predictions);
  fmt::print("judge          {}\n{}", judge->name(), eval::format_report(report));

  nlohmann::ordered_json doc;
  doc["judge"] = judge->name();
  doc["tau"] = o.tau;
  doc["report"] = report.to_json();
  doc["predictions"] = nlohmann::ordered_json::array();
  for (const auto& p : predictions)
    doc["predictions"].push_back({{"chain_id", p.chain_id},
                                  {"valid", p.valid},
                                  {"first_error", p.first_error ? nlohmann::ordered_json(*p.first_error)
                                                                : nlohmann::ordered_json()}});
  prepare_output(out);
  write_text(out, doc.dump(2) + "\n");

  RunManifest manifest("eval");
  manifest.settings() = {{"judge", judge->name()}, {"tau", o.tau}};
  manifest.add_input("chains", o.chains);
  if (!o.scores.empty()) manifest.add_input("scores", o.scores);
  if (!o.problems.empty()) manifest.add_input("problems", o.problems);
  manifest.add_output("report", out);
  manifest.runtime()["out"] = out.string();
  write_manifest(manifest, out, start);
  return kExitOk;
}

// --------------------------------------------------------------- validate-plan

struct ValidateOptions {
  std::string domain;
  std::string problem;
  std::string plan;
  bool check_optimal = false;
};

struct PlanFile {
  std::vector<ActionId> actions;
  std::optional<std::string> unknown;  // first step naming no ground action
  std::size_t unknown_step = 0;
};

PlanFile read_plan(const GroundTask& task, const fs::path& path) {
  std::istringstream in(slurp(path));
  PlanFile out;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find(';'));
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    auto a = task.find_action(line);
    if (!a) {
      out.unknown = line;
      out.unknown_step = out.actions.size() + 1;
      return out;
    }
    out.actions.push_back(*a);
  }
  return out;
}

int validate_plan(const Common&, const ValidateOptions& o) {
  const auto domain = load_domain(o.domain);
  const auto problem = pddl::parse_problem(slurp(o.problem), domain);
  const GroundTask task = ground(domain, problem);
  const PlanFile plan = read_plan(task, o.plan);
  if (plan.unknown) {
    fmt::print("invalid: step {} '{}' is not applicable in any reachable state\n", plan.unknown_step, *plan.unknown);
    return kExitDomainError;
  }
  if (auto bad = first_plan_violation(task, task.init, plan.actions)) {
    if (*bad < plan.actions.size())
      fmt::print("invalid: step {} {} is not applicable\n", *bad + 1, task.actions[plan.actions[*bad]].name());
    else
      fmt::print("invalid: the plan does not reach the goal\n");
    return kExitDomainError;
  }
  int cost = 0;
  for (ActionId a : plan.actions) cost += task.actions[a].cost;
  fmt::print("valid: {} steps, cost {}\n", plan.actions.size(), cost);
  if (!o.check_optimal) return kExitOk;
  auto result = solve_optimal(task, task.init, HeuristicKind::LmCut);
  if (result.outcome != SearchOutcome::Solved)
    throw std::runtime_error(fmt::format("optimality check failed: {}", to_string(result.outcome)));
  if (result.plan->cost != cost) {
    fmt::print("not optimal: optimal cost is {}\n", result.plan->cost);
    return kExitDomainError;
  }
  fmt::print("optimal\n");
  return kExitOk;
}

// ----------------------------------------------------------------------- solve

struct SolveOptions {
  std::string domain;
  std::string problem;
  std::string out;
  std::string heuristic = "lmcut";
  std::uint64_t max_expansions = SearchLimits{}.max_expansions;
  double max_seconds = 60.0;
};

int solve_command(const Common&, const SolveOptions& o) {
  const auto domain = load_domain(o.domain);
  const auto problem = pddl::parse_problem(slurp(o.problem), domain);
  const GroundTask task = ground(domain, problem);
  SearchLimits limits{o.max_expansions, std::chrono::milliseconds(static_cast<long long>(o.max_seconds * 1000))};
  auto result = solve_optimal(task, task.init, *heuristic_from_string(o.heuristic), limits);
  spdlog::info("{} after {} expansions", to_string(result.outcome), result.expansions);
  if (result.outcome != SearchOutcome::Solved) {
    fmt::print(stderr, "{}: {}\n", problem.name, to_string(result.outcome));
    return kExitDomainError;
  }
  std::string text;
  for (ActionId a : result.plan->actions) {
    const auto& act = task.actions[a];
    text += fmt::format("({}{}{})\n", act.schema, act.args.empty() ? "" : " ", fmt::join(act.args, " "));
  }
  text += fmt::format("; cost {}\n", result.plan->cost);
  if (o.out.empty()) fmt::print("{}", text);
  else {
    prepare_output(o.out);
    write_text(o.out, text);
  }
  return kExitOk;
}

void setup_logging(const std::string& level) {
  auto logger = std::make_shared<spdlog::logger>("plansteps", std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
  logger->set_level(spdlog::level::from_str(level));
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Step-level reward datasets from classical planning problems.", "plansteps"};
  app.set_version_flag("--version", std::string(kToolVersion));
  // At most one; an unknown word then surfaces as unexpected rather than
  // as a missing subcommand.
  app.require_subcommand(0, 1);
  app.failure_message(CLI::FailureMessage::help);

  Common common;
  app.add_option("--config", common.config_path, "JSON configuration file")
      ->envname("PLANSTEPS_CONFIG")
      ->check(CLI::ExistingFile);
  app.add_option("--log-level", common.log_level, "Logging threshold on standard error")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}))
      ->capture_default_str();

  std::function<int()> action;

  GenProblemsOptions gp;
  auto* gp_cmd = app.add_subcommand("gen-problems", "Generate solvable problem instances per domain");
  gp_cmd->add_option("--out", gp.out, "Output directory (must be empty or absent)")->required();
  gp_cmd->add_option("--count", gp.count, "Problems per domain")->check(CLI::NonNegativeNumber)->capture_default_str();
  gp_cmd->add_option("--domains", gp.domains, "Comma-separated domain ids (default: all)");
  auto* gp_seed = gp_cmd->add_option("--seed", gp.seed, "Master seed")->capture_default_str();
  gp_cmd->add_option("--workers", gp.workers, "Worker threads (default: all cores)");
  gp_cmd->callback([&] {
    gp.seed_set = gp_seed->count() > 0;
    action = [&] { return gen_problems(common, gp); };
  });

  GenDatasetOptions gd;
  auto* gd_cmd = app.add_subcommand("gen-dataset", "Label candidate steps along optimal trajectories");
  gd_cmd->add_option("--problems", gd.problems, "Directory written by gen-problems")->required()->check(CLI::ExistingDirectory);
  gd_cmd->add_option("--out", gd.out, "Output JSON Lines file")->required();
  auto* gd_seed = gd_cmd->add_option("--seed", gd.seed, "Master seed")->capture_default_str();
  auto* gd_y = gd_cmd->add_option("--y", gd.y, "Candidates sampled per state")->check(CLI::PositiveNumber)->capture_default_str();
  auto* gd_p = gd_cmd->add_option("--p-inapp", gd.p_inapp, "Probability of drawing from the inapplicable pool")
                   ->check(CLI::Range(0.0, 1.0))
                   ->capture_default_str();
  gd_cmd->add_option("--workers", gd.workers, "Worker threads (default: all cores)");
  gd_cmd->callback([&] {
    gd.seed_set = gd_seed->count() > 0;
    gd.y_set = gd_y->count() > 0;
    gd.p_inapp_set = gd_p->count() > 0;
    action = [&] { return gen_dataset(common, gd); };
  });

  SplitOptions sp;
  auto* sp_cmd = app.add_subcommand("split", "Assign problems to train/val/test and the holdout domain");
  sp_cmd->add_option("--records", sp.records, "Dataset JSON Lines file")->required()->check(CLI::ExistingFile);
  sp_cmd->add_option("--out", sp.out, "Split JSON Lines file (default: <records>.splits.jsonl)");
  sp_cmd->add_option("--seed", sp.seed, "Shuffle seed")->capture_default_str();
  sp_cmd->add_option("--holdout", sp.holdout, "Domain held out entirely")->capture_default_str();
  sp_cmd->add_option("--ratios", sp.ratios, "train,val,test proportions")->capture_default_str();
  sp_cmd->callback([&] { action = [&] { return split_command(common, sp); }; });

  StatsOptions st;
  auto* st_cmd = app.add_subcommand("stats", "Per-domain problem count, mean optimal plan length and steps");
  st_cmd->add_option("--records", st.records, "Dataset JSON Lines file")->required()->check(CLI::ExistingFile);
  st_cmd->add_option("--splits", st.splits, "Split file to filter by")->check(CLI::ExistingFile);
  st_cmd->add_option("--split", st.split, "Split to report (with --splits)")
      ->check(CLI::IsMember({"train", "val", "test", "holdout"}));
  st_cmd->add_option("--json", st.json_out, "Also write the table as JSON");
  st_cmd->callback([&] { action = [&] { return stats_command(common, st); }; });

  ChainsOptions ch;
  auto* ch_cmd = app.add_subcommand("build-chains", "Build first-error evaluation chains");
  ch_cmd->add_option("--problems", ch.problems, "Directory written by gen-problems")->required()->check(CLI::ExistingDirectory);
  ch_cmd->add_option("--out", ch.out, "Output JSON Lines file")->required();
  ch_cmd->add_option("--splits", ch.splits, "Split file; keeps only the problems of --split")->check(CLI::ExistingFile);
  ch_cmd->add_option("--split", ch.split_names, "Comma-separated splits to keep (with --splits)")->capture_default_str();
  ch_cmd->add_option("--seed", ch.seed, "Chain seed")->capture_default_str();
  ch_cmd->add_option("--error-fraction", ch.error_fraction, "Share of chains with an injected error")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ch_cmd->add_option("--error-categories", ch.categories, "Comma-separated categories that count as errors")
      ->capture_default_str();
  ch_cmd->add_option("--workers", ch.workers, "Worker threads (default: all cores)");
  ch_cmd->callback([&] { action = [&] { return build_chains(common, ch); }; });

  EvalOptions ev;
  auto* ev_cmd = app.add_subcommand("eval", "Score a judge on evaluation chains");
  ev_cmd->add_option("--chains", ev.chains, "Chains written by build-chains")->required()->check(CLI::ExistingFile);
  auto* ev_judge = ev_cmd->add_option("--judge", ev.judge, "oracle, const:<v>, random[:seed] or a shell command");
  auto* ev_scores = ev_cmd->add_option("--scores", ev.scores, "Precomputed {chain_id, scores} JSON Lines")
                        ->check(CLI::ExistingFile);
  ev_judge->excludes(ev_scores);
  ev_cmd->add_option("--problems", ev.problems, "Problem directory (oracle judge)")->check(CLI::ExistingDirectory);
  ev_cmd->add_option("--tau", ev.tau, "A step scoring below tau is an error")->capture_default_str();
  ev_cmd->add_option("--out", ev.out, "Report JSON (default: <chains>.report.json)");
  ev_cmd->callback([&] {
    if (ev_judge->count() + ev_scores->count() != 1) throw CLI::RequiredError("--judge or --scores");
    action = [&] { return eval_command(common, ev); };
  });

  ValidateOptions va;
  auto* va_cmd = app.add_subcommand("validate-plan", "Check a plan against a problem");
  va_cmd->add_option("--domain", va.domain, "Domain file or built-in domain id")->required();
  va_cmd->add_option("--problem", va.problem, "Problem file")->required()->check(CLI::ExistingFile);
  va_cmd->add_option("--plan", va.plan, "One action per line, (name args) or name(args)")->required()->check(CLI::ExistingFile);
  va_cmd->add_flag("--check-optimal", va.check_optimal, "Also require the plan cost to be optimal");
  va_cmd->callback([&] { action = [&] { return validate_plan(common, va); }; });

  SolveOptions so;
  auto* so_cmd = app.add_subcommand("solve", "Compute an optimal plan");
  so_cmd->add_option("--domain", so.domain, "Domain file or built-in domain id")->required();
  so_cmd->add_option("--problem", so.problem, "Problem file")->required()->check(CLI::ExistingFile);
  so_cmd->add_option("--out", so.out, "Plan file (default: standard output)");
  so_cmd->add_option("--heuristic", so.heuristic, "A* heuristic")
      ->check(CLI::IsMember({"lmcut", "hmax", "blind"}))
      ->capture_default_str();
  so_cmd->add_option("--max-expansions", so.max_expansions, "Expansion budget")->capture_default_str();
  so_cmd->add_option("--max-seconds", so.max_seconds, "Time budget")->capture_default_str();
  so_cmd->callback([&] { action = [&] { return solve_command(common, so); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (!action) throw CLI::RequiredError("A subcommand");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  setup_logging(common.log_level);
  try {
    return action();
  } catch (const UsageError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitDomainError;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace plansteps::cli
