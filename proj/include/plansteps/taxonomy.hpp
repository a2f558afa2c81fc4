#pragma once

// Five-level reward taxonomy for candidate actions along an optimal
// trajectory, plus optimal-action extraction and candidate sampling.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "plansteps/grounder.hpp"
#include "plansteps/rng.hpp"
#include "plansteps/search.hpp"

namespace plansteps {

enum class Category { NonExecutable, DeadEnd, Backtracking, Suboptimal, Optimal };

inline constexpr Category kAllCategories[] = {Category::NonExecutable, Category::DeadEnd,
                                              Category::Backtracking, Category::Suboptimal,
                                              Category::Optimal};

double reward_of(Category c);  // 0.0, 0.25, 0.5, 0.75, 1.0
std::string_view to_string(Category c);
std::optional<Category> category_from_string(std::string_view name);

struct ActionVerdict {
  Category category = Category::NonExecutable;
  double reward = 0.0;
  std::string evidence;
};

// States traversed so far by executed actions. The current state is the last
// one. Along an optimal trajectory states never repeat; move_to relaxes that
// for chains that continue after an injected error.
class TrajectoryContext {
 public:
  explicit TrajectoryContext(State start);

  const State& current() const { return visited_.back(); }
  const std::vector<State>& visited() const { return visited_; }
  std::size_t step_index() const { return visited_.size() - 1; }
  // Index of s in the trajectory, if visited.
  std::optional<std::size_t> position_of(const State& s) const;
  // Throws std::logic_error if `next` was already visited.
  void advance(State next);
  // Like advance, but a revisit is allowed; position_of keeps the first visit.
  void move_to(State next);

 private:
  std::vector<State> visited_;
  std::unordered_map<State, std::size_t> positions_;
};

class TaxonomyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised when the planner exhausts its budget; callers drop the instance.
class PlannerLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Classifies actions against one task. Plans are cached per start state, so
// reuse one evaluator for all queries on the same instance. Not thread-safe.
class ActionEvaluator {
 public:
  explicit ActionEvaluator(const GroundTask& task, HeuristicKind kind = HeuristicKind::LmCut,
                           SearchLimits limits = {});

  const GroundTask& task() const { return task_; }

  // Deterministic optimal plan from s, or nullopt if s is a dead end.
  const Plan* plan_from(const State& s);
  std::optional<int> cost_to_go(const State& s);

  // First action of the optimal plan from s.
  ActionId optimal_action(const State& s);

  ActionVerdict evaluate(const TrajectoryContext& ctx, ActionId a);

  std::uint64_t searches() const { return searches_; }
  std::uint64_t expansions() const { return expansions_; }

 private:
  const GroundTask& task_;
  std::unique_ptr<Heuristic> heuristic_;
  SearchLimits limits_;
  std::unordered_map<State, std::optional<Plan>> cache_;
  std::uint64_t searches_ = 0;
  std::uint64_t expansions_ = 0;
};

ActionId get_opt_action(const GroundTask& task, const State& s);
ActionVerdict eval_action(const GroundTask& task, const TrajectoryContext& ctx, ActionId a);

inline constexpr double kDefaultInapplicableProbability = 0.25;
inline constexpr int kDefaultCandidates = 8;

// Up to y distinct actions. Each draw takes the inapplicable pool with
// probability p_inapp and the applicable pool otherwise, uniformly within the
// pool; an exhausted pool yields to the other one unless p_inapp is exactly 0
// or 1, which pins the pool.
std::vector<ActionId> get_rand_actions(const GroundTask& task, const TrajectoryContext& ctx,
                                       int y, Rng& rng,
                                       double p_inapp = kDefaultInapplicableProbability);

}  // namespace plansteps
