#include <fmt/format.h>

#include "plansteps/taxonomy.hpp"

namespace plansteps {

double reward_of(Category c) {
  switch (c) {
    case Category::NonExecutable: return 0.0;
    case Category::DeadEnd: return 0.25;
    case Category::Backtracking: return 0.5;
    case Category::Suboptimal: return 0.75;
    case Category::Optimal: return 1.0;
  }
  return 0.0;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::NonExecutable: return "non-executable";
    case Category::DeadEnd: return "dead-end";
    case Category::Backtracking: return "backtracking";
    case Category::Suboptimal: return "suboptimal";
    case Category::Optimal: return "optimal";
  }
  return "?";
}

std::optional<Category> category_from_string(std::string_view name) {
  for (Category c : kAllCategories)
    if (to_string(c) == name) return c;
  return std::nullopt;
}

TrajectoryContext::TrajectoryContext(State start) {
  positions_.emplace(start, 0);
  visited_.push_back(std::move(start));
}

std::optional<std::size_t> TrajectoryContext::position_of(const State& s) const {
  auto it = positions_.find(s);
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

void TrajectoryContext::advance(State next) {
  if (!positions_.emplace(next, visited_.size()).second)
    throw std::logic_error("trajectory revisits a state");
  visited_.push_back(std::move(next));
}

void TrajectoryContext::move_to(State next) {
  positions_.emplace(next, visited_.size());
  visited_.push_back(std::move(next));
}

ActionEvaluator::ActionEvaluator(const GroundTask& task, HeuristicKind kind, SearchLimits limits)
    : task_(task), heuristic_(make_heuristic(kind, task)), limits_(limits) {}

const Plan* ActionEvaluator::plan_from(const State& s) {
  auto it = cache_.find(s);
  if (it == cache_.end()) {
    SearchResult result = solve_optimal(task_, s, *heuristic_, limits_);
    ++searches_;
    expansions_ += result.expansions;
    if (result.outcome == SearchOutcome::ResourceLimit)
      throw PlannerLimitExceeded(fmt::format("planner budget exhausted after {} expansions",
                                             result.expansions));
    it = cache_.emplace(s, std::move(result.plan)).first;
  }
  return it->second ? &*it->second : nullptr;
}

std::optional<int> ActionEvaluator::cost_to_go(const State& s) {
  const Plan* plan = plan_from(s);
  if (!plan) return std::nullopt;
  return plan->cost;
}

ActionId ActionEvaluator::optimal_action(const State& s) {
  const Plan* plan = plan_from(s);
  if (!plan) throw TaxonomyError("no optimal action: state is unsolvable");
  if (plan->actions.empty()) throw TaxonomyError("no optimal action: already at goal");
  return plan->actions.front();
}

ActionVerdict ActionEvaluator::evaluate(const TrajectoryContext& ctx, ActionId a) {
  auto verdict = [](Category c, std::string evidence = {}) {
    return ActionVerdict{c, reward_of(c), std::move(evidence)};
  };
  const State& current = ctx.current();
  if (!is_applicable(task_, current, a)) return verdict(Category::NonExecutable);

  State next = apply(task_, current, a);
  const Plan* continuation = plan_from(next);
  if (!continuation) return verdict(Category::DeadEnd);

  for (std::size_t i = 0; i < continuation->state_trace.size(); ++i) {
    if (auto k = ctx.position_of(continuation->state_trace[i]))
      return verdict(Category::Backtracking,
                     fmt::format("continuation step {} revisits trajectory state {}", i, *k));
  }

  auto here = cost_to_go(current);
  if (!here) throw TaxonomyError("current state is unsolvable");
  if (task_.actions[a].cost + continuation->cost == *here) return verdict(Category::Optimal);
  return verdict(Category::Suboptimal);
}

ActionId get_opt_action(const GroundTask& task, const State& s) {
  return ActionEvaluator(task).optimal_action(s);
}

ActionVerdict eval_action(const GroundTask& task, const TrajectoryContext& ctx, ActionId a) {
  return ActionEvaluator(task).evaluate(ctx, a);
}

std::vector<ActionId> get_rand_actions(const GroundTask& task, const TrajectoryContext& ctx,
                                       int y, Rng& rng, double p_inapp) {
  std::vector<ActionId> executable, inapplicable;
  for (const auto& act : task.actions)
    (is_applicable(task, ctx.current(), act.id) ? executable : inapplicable).push_back(act.id);
  if (p_inapp <= 0.0) inapplicable.clear();
  if (p_inapp >= 1.0) executable.clear();

  std::vector<ActionId> out;
  while (static_cast<int>(out.size()) < y && !(executable.empty() && inapplicable.empty())) {
    bool take_inapplicable;
    if (executable.empty()) take_inapplicable = true;
    else if (inapplicable.empty()) take_inapplicable = false;
    else take_inapplicable = rng.bernoulli(p_inapp);
    auto& pool = take_inapplicable ? inapplicable : executable;
    std::size_t i = rng.uniform_index(pool.size());
    out.push_back(pool[i]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

}  // namespace plansteps
