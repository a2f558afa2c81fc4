#include <algorithm>
#include <exception>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <omp.h>
#include <spdlog/spdlog.h>

#include "plansteps/eval.hpp"
#include "plansteps/verbalizer.hpp"

namespace plansteps::eval {

nlohmann::ordered_json EvalChain::to_json() const {
  nlohmann::ordered_json j;
  j["chain_id"] = chain_id;
  j["problem_nl"] = problem_nl;
  j["steps"] = steps;
  j["gold_first_error"] = gold_first_error ? nlohmann::ordered_json(*gold_first_error) : nlohmann::ordered_json();
  j["gold_categories"] = nlohmann::ordered_json::array();
  for (Category c : gold_categories) j["gold_categories"].push_back(std::string(to_string(c)));
  j["meta"] = {{"domain_id", domain_id}, {"problem_id", problem_id}, {"seed", seed}};
  return j;
}

EvalChain EvalChain::from_json(const nlohmann::json& j) {
  EvalChain c;
  c.chain_id = j.at("chain_id").get<std::string>();
  c.problem_nl = j.at("problem_nl").get<std::string>();
  c.steps = j.at("steps").get<std::vector<std::string>>();
  if (!j.at("gold_first_error").is_null()) c.gold_first_error = j.at("gold_first_error").get<int>();
  for (const auto& name : j.at("gold_categories")) {
    auto cat = category_from_string(name.get<std::string>());
    if (!cat) throw std::invalid_argument(fmt::format("unknown category {}", name.dump()));
    c.gold_categories.push_back(*cat);
  }
  if (c.gold_categories.size() != c.steps.size())
    throw std::invalid_argument(fmt::format("chain {}: {} steps but {} gold categories", c.chain_id, c.steps.size(),
                                            c.gold_categories.size()));
  if (c.gold_first_error && (*c.gold_first_error < 1 || *c.gold_first_error > static_cast<int>(c.steps.size())))
    throw std::invalid_argument(fmt::format("chain {}: gold_first_error out of range", c.chain_id));
  const auto& meta = j.at("meta");
  c.domain_id = meta.at("domain_id").get<std::string>();
  c.problem_id = meta.at("problem_id").get<std::string>();
  c.seed = meta.at("seed").get<std::uint64_t>();
  return c;
}

nlohmann::ordered_json ChainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["error_fraction"] = error_fraction;
  j["error_categories"] = nlohmann::ordered_json::array();
  for (Category c : error_categories) j["error_categories"].push_back(std::string(to_string(c)));
  j["seed"] = seed;
  j["template_dir"] = template_dir;
  j["planner"] = {{"max_expansions", limits.max_expansions},
                  {"max_seconds", static_cast<double>(limits.max_time.count()) / 1000.0}};
  return j;
}

std::vector<Category> replay_categories(ActionEvaluator& evaluator,
                                        const std::vector<std::optional<ActionId>>& steps) {
  const GroundTask& task = evaluator.task();
  TrajectoryContext ctx(task.init);
  std::vector<Category> out;
  for (const auto& step : steps) {
    if (!step) {
      out.push_back(Category::NonExecutable);
      continue;
    }
    out.push_back(evaluator.evaluate(ctx, *step).category);
    if (is_applicable(task, ctx.current(), *step)) ctx.move_to(apply(task, ctx.current(), *step));
  }
  return out;
}

namespace {

struct Injection {
  int position = 0;  // 1-based
  ActionId action = -1;
};

// Error candidates at 1-based position k of the optimal plan, grouped in the
// configured category order.
std::vector<std::vector<ActionId>> error_candidates(ActionEvaluator& evaluator, const Plan& plan, int k,
                                                    const std::vector<Category>& categories) {
  const GroundTask& task = evaluator.task();
  TrajectoryContext ctx(plan.state_trace.front());
  for (int i = 1; i < k; ++i) ctx.advance(plan.state_trace[i]);
  std::vector<std::vector<ActionId>> out(categories.size());
  for (const auto& act : task.actions) {
    Category c = evaluator.evaluate(ctx, act.id).category;
    auto it = std::find(categories.begin(), categories.end(), c);
    if (it != categories.end()) out[it - categories.begin()].push_back(act.id);
  }
  return out;
}

std::optional<Injection> draw_injection(ActionEvaluator& evaluator, const Plan& plan, const ChainConfig& config,
                                        Rng& rng) {
  std::vector<int> positions;
  for (int k = 1; k <= static_cast<int>(plan.actions.size()); ++k) positions.push_back(k);
  // The first position of a uniform permutation that qualifies is uniform
  // among qualifying positions.
  rng.shuffle(positions);
  for (int k : positions) {
    auto groups = error_candidates(evaluator, plan, k, config.error_categories);
    std::vector<std::size_t> available;
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (!groups[g].empty()) available.push_back(g);
    if (available.empty()) continue;
    const auto& group = groups[available[rng.uniform_index(available.size())]];
    return Injection{k, group[rng.uniform_index(group.size())]};
  }
  return std::nullopt;
}

struct ChainOutcome {
  std::optional<EvalChain> chain;
  std::optional<SkippedInstance> skipped;
};

ChainOutcome build_chain(const pipeline::ProblemInstance& instance, const ChainConfig& config) {
  auto skip = [&](std::string reason) {
    spdlog::warn("skipping {}/{}: {}", instance.domain_id, instance.problem_id, reason);
    return ChainOutcome{std::nullopt, SkippedInstance{instance.domain_id, instance.problem_id, std::move(reason)}};
  };
  GroundTask task = ground(*instance.domain, instance.problem);
  if (task.goal_unreachable) return skip("goal unreachable under delete relaxation");
  ActionEvaluator evaluator(task, HeuristicKind::LmCut, config.limits);
  try {
    const Plan* plan = evaluator.plan_from(task.init);
    if (!plan) return skip("unsolvable");
    if (plan->actions.empty()) return skip("initial state satisfies the goal");
    const Plan optimal = *plan;

    Rng rng(derive_seed(pipeline::problem_seed(config.seed, instance.domain_id, instance.problem_id), "chain"));
    std::vector<ActionId> actions;
    std::optional<int> expected_error;
    if (rng.bernoulli(config.error_fraction)) {
      auto injection = draw_injection(evaluator, optimal, config, rng);
      if (!injection) return skip("no erroneous candidate at any position");
      const int k = injection->position;
      actions.assign(optimal.actions.begin(), optimal.actions.begin() + (k - 1));
      actions.push_back(injection->action);
      const State& before = optimal.state_trace[k - 1];
      // An inapplicable step leaves the state as it was.
      const State after = is_applicable(task, before, injection->action) ? apply(task, before, injection->action)
                                                                          : before;
      if (const Plan* rest = evaluator.plan_from(after))
        actions.insert(actions.end(), rest->actions.begin(), rest->actions.end());
      expected_error = k;
    } else {
      actions = optimal.actions;
    }

    EvalChain chain;
    chain.chain_id = instance.problem_id;
    chain.domain_id = instance.domain_id;
    chain.problem_id = instance.problem_id;
    chain.seed = config.seed;
    chain.gold_categories =
        replay_categories(evaluator, std::vector<std::optional<ActionId>>(actions.begin(), actions.end()));
    for (std::size_t i = 0; i < chain.gold_categories.size() && !chain.gold_first_error; ++i)
      if (std::count(config.error_categories.begin(), config.error_categories.end(), chain.gold_categories[i]))
        chain.gold_first_error = static_cast<int>(i) + 1;
    if (chain.gold_first_error != expected_error)
      throw TaxonomyError(fmt::format("{}: replayed first error disagrees with the injected one", instance.problem_id));

    verbal::Verbalizer verbalizer(*instance.domain, verbal::load_templates(instance.domain_id, config.template_dir));
    chain.problem_nl = verbalizer.render_problem(instance.problem);
    for (ActionId a : actions) chain.steps.push_back(verbalizer.render_step(task, a));
    return ChainOutcome{std::move(chain), std::nullopt};
  } catch (const PlannerLimitExceeded& e) {
    return skip(fmt::format("planner limit: {}", e.what()));
  }
}

}  // namespace

ChainSet build_eval_chains(const std::vector<pipeline::ProblemInstance>& instances, const ChainConfig& config,
                           int workers) {
  if (!(config.error_fraction >= 0.0 && config.error_fraction <= 1.0))
    throw std::invalid_argument("error_fraction must be in [0, 1]");
  if (config.error_categories.empty()) throw std::invalid_argument("error_categories must not be empty");
  if (std::count(config.error_categories.begin(), config.error_categories.end(), Category::Optimal))
    throw std::invalid_argument("optimal steps cannot be errors");
  if (workers <= 0) workers = omp_get_num_procs();

  std::vector<ChainOutcome> outcomes(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  const auto n = static_cast<std::ptrdiff_t>(instances.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      outcomes[i] = build_chain(instances[i], config);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ChainSet out;
  for (auto& o : outcomes) {
    if (o.chain) out.chains.push_back(std::move(*o.chain));
    if (o.skipped) out.skipped.push_back(std::move(*o.skipped));
  }
  auto key = [](const auto& x) { return std::tie(x.domain_id, x.problem_id); };
  std::sort(out.chains.begin(), out.chains.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::sort(out.skipped.begin(), out.skipped.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::set<std::string> ids;
  for (const auto& c : out.chains)
    if (!ids.insert(c.chain_id).second) throw std::invalid_argument(fmt::format("duplicate chain id {}", c.chain_id));
  return out;
}

void write_chains(const std::filesystem::path& path, const std::vector<EvalChain>& chains) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  for (const auto& c : chains) out << c.to_json().dump() << '\n';
}

std::vector<EvalChain> read_chains(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::vector<EvalChain> out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(EvalChain::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
  return out;
}

}  // namespace plansteps::eval
