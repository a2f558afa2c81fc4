#include <algorithm>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "plansteps/search.hpp"

namespace plansteps {

std::string_view to_string(SearchOutcome outcome) {
  switch (outcome) {
    case SearchOutcome::Solved: return "solved";
    case SearchOutcome::Unsolvable: return "unsolvable";
    case SearchOutcome::ResourceLimit: return "resource-limit";
  }
  return "?";
}

namespace {

struct Node {
  State state;
  int g = 0;
  int h = 0;
  int parent = -1;
  ActionId action = -1;
};

struct OpenEntry {
  int f;
  int h;
  std::uint64_t seq;
  int node;
  int g;
  // std::priority_queue is a max-heap; invert so the smallest key is on top.
  bool operator<(const OpenEntry& o) const {
    return std::tie(f, h, seq) > std::tie(o.f, o.h, o.seq);
  }
};

Plan extract_plan(const std::vector<Node>& nodes, int goal) {
  Plan plan;
  for (int n = goal; n >= 0; n = nodes[n].parent) {
    plan.state_trace.push_back(nodes[n].state);
    if (nodes[n].parent >= 0) plan.actions.push_back(nodes[n].action);
  }
  std::reverse(plan.state_trace.begin(), plan.state_trace.end());
  std::reverse(plan.actions.begin(), plan.actions.end());
  plan.cost = nodes[goal].g;
  return plan;
}

}  // namespace

SearchResult solve_optimal(const GroundTask& task, const State& s, Heuristic& heuristic,
                           const SearchLimits& limits) {
  SearchResult result;
  const auto started = std::chrono::steady_clock::now();

  std::vector<Node> nodes;
  std::unordered_map<State, int> index;
  std::priority_queue<OpenEntry> open;
  std::uint64_t seq = 0;

  int h0 = heuristic.evaluate(s);
  if (h0 == kInfinity) return result;  // Unsolvable
  nodes.push_back({s, 0, h0, -1, -1});
  index.emplace(s, 0);
  open.push({h0, h0, seq++, 0, 0});

  while (!open.empty()) {
    result.peak_open = std::max<std::uint64_t>(result.peak_open, open.size());
    OpenEntry top = open.top();
    open.pop();
    if (top.g != nodes[top.node].g) continue;  // stale entry superseded by a cheaper path

    if (task.is_goal(nodes[top.node].state)) {
      result.outcome = SearchOutcome::Solved;
      result.plan = extract_plan(nodes, top.node);
      return result;
    }
    if (result.expansions >= limits.max_expansions ||
        ((result.expansions & 255) == 0 &&
         std::chrono::steady_clock::now() - started > limits.max_time)) {
      result.outcome = SearchOutcome::ResourceLimit;
      return result;
    }
    ++result.expansions;

    const State current = nodes[top.node].state;
    const int g = nodes[top.node].g;
    for (const auto& act : task.actions) {
      if (!is_applicable(task, current, act.id)) continue;
      State next = apply(task, current, act.id);
      int next_g = g + act.cost;
      auto it = index.find(next);
      int id;
      if (it == index.end()) {
        int h = heuristic.evaluate(next);
        id = static_cast<int>(nodes.size());
        nodes.push_back({std::move(next), next_g, h, top.node, act.id});
        index.emplace(nodes.back().state, id);
        if (h == kInfinity) continue;
      } else {
        id = it->second;
        Node& node = nodes[id];
        if (node.h == kInfinity || node.g <= next_g) continue;
        node.g = next_g;  // reopened
        node.parent = top.node;
        node.action = act.id;
      }
      open.push({next_g + nodes[id].h, nodes[id].h, seq++, id, next_g});
    }
  }
  result.outcome = SearchOutcome::Unsolvable;
  return result;
}

SearchResult solve_optimal(const GroundTask& task, const State& s, HeuristicKind kind,
                           const SearchLimits& limits) {
  auto heuristic = make_heuristic(kind, task);
  return solve_optimal(task, s, *heuristic, limits);
}

std::optional<std::size_t> first_plan_violation(const GroundTask& task, const State& s,
                                                const std::vector<ActionId>& actions) {
  State current = s;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (!is_applicable(task, current, actions[i])) return i;
    current = apply(task, current, actions[i]);
  }
  if (!task.is_goal(current)) return actions.size();
  return std::nullopt;
}

}  // namespace plansteps
