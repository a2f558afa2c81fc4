#pragma once

// Optimal planning: delete-relaxation heuristics (hmax, LM-cut), A*, and an
// exhaustive state-space oracle for small tasks.

#include <chrono>
#include <climits>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "plansteps/grounder.hpp"

namespace plansteps {

inline constexpr int kInfinity = INT_MAX;

enum class HeuristicKind { LmCut, HMax, Blind };

std::string_view to_string(HeuristicKind kind);
std::optional<HeuristicKind> heuristic_from_string(std::string_view name);

// Heuristic evaluators keep per-search scratch buffers and must not be shared
// between threads.
class Heuristic {
 public:
  virtual ~Heuristic() = default;
  virtual int evaluate(const State& s) = 0;  // kInfinity marks a proven dead end
};

std::unique_ptr<Heuristic> make_heuristic(HeuristicKind kind, const GroundTask& task);

int h_max(const GroundTask& task, const State& s);
int h_lmcut(const GroundTask& task, const State& s);

struct Plan {
  std::vector<ActionId> actions;
  int cost = 0;
  std::vector<State> state_trace;  // s0 .. sn, one more than actions
};

enum class SearchOutcome { Solved, Unsolvable, ResourceLimit };

std::string_view to_string(SearchOutcome outcome);

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Unsolvable;
  std::optional<Plan> plan;
  std::uint64_t expansions = 0;
  std::uint64_t peak_open = 0;
};

struct SearchLimits {
  std::uint64_t max_expansions = 1'000'000;
  std::chrono::milliseconds max_time{60'000};
};

// A* with reopening; ties on f are broken by lower h, then insertion order.
SearchResult solve_optimal(const GroundTask& task, const State& s, Heuristic& heuristic,
                           const SearchLimits& limits = {});
SearchResult solve_optimal(const GroundTask& task, const State& s,
                           HeuristicKind kind = HeuristicKind::LmCut,
                           const SearchLimits& limits = {});

// Checks a plan step by step. Returns the index of the first inapplicable
// action, actions.size() if the final state misses the goal, or nullopt if the
// plan is valid.
std::optional<std::size_t> first_plan_violation(const GroundTask& task, const State& s,
                                                const std::vector<ActionId>& actions);

class StateSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Explicit forward-reachable graph.
struct StateSpace {
  std::vector<State> states;  // BFS discovery order, states[0] = start
  std::unordered_map<State, int> index;
  // Successors per state as (action, target state index), ascending action id.
  std::vector<std::vector<std::pair<ActionId, int>>> successors;
};

inline constexpr std::size_t kDefaultStateBound = 50'000;

StateSpace enumerate_reachable(const GroundTask& task, const State& from,
                               std::size_t bound = kDefaultStateBound);

// Exact optimal cost-to-go for every state reachable from init that can still
// reach the goal. States missing from the map are dead ends.
using HStarTable = std::unordered_map<State, int>;

HStarTable brute_force_hstar(const GroundTask& task, std::size_t bound = kDefaultStateBound);
HStarTable brute_force_hstar(const GroundTask& task, const StateSpace& space);

}  // namespace plansteps
