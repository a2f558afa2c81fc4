#include <deque>

#include <fmt/format.h>

#include "plansteps/search.hpp"

namespace plansteps {

StateSpace enumerate_reachable(const GroundTask& task, const State& from, std::size_t bound) {
  StateSpace space;
  space.states.push_back(from);
  space.index.emplace(from, 0);
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    std::vector<std::pair<ActionId, int>> succ;
    const State current = space.states[i];
    for (ActionId a : applicable(task, current)) {
      State next = apply(task, current, a);
      auto [it, inserted] =
          space.index.try_emplace(std::move(next), static_cast<int>(space.states.size()));
      if (inserted) {
        if (space.states.size() >= bound)
          throw StateSpaceTooLarge(
              fmt::format("more than {} reachable states; refusing to enumerate", bound));
        space.states.push_back(it->first);
      }
      succ.emplace_back(a, it->second);
    }
    space.successors.push_back(std::move(succ));
  }
  return space;
}

HStarTable brute_force_hstar(const GroundTask& task, const StateSpace& space) {
  const std::size_t n = space.states.size();
  std::vector<std::vector<int>> predecessors(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [a, j] : space.successors[i]) predecessors[j].push_back(static_cast<int>(i));

  // Backward breadth-first layers from all goal states (unit costs).
  std::vector<int> dist(n, -1);
  std::deque<int> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (task.is_goal(space.states[i])) {
      dist[i] = 0;
      queue.push_back(static_cast<int>(i));
    }
  }
  while (!queue.empty()) {
    int j = queue.front();
    queue.pop_front();
    for (int i : predecessors[j]) {
      if (dist[i] >= 0) continue;
      dist[i] = dist[j] + 1;
      queue.push_back(i);
    }
  }
  HStarTable table;
  for (std::size_t i = 0; i < n; ++i)
    if (dist[i] >= 0) table.emplace(space.states[i], dist[i]);
  return table;
}

HStarTable brute_force_hstar(const GroundTask& task, std::size_t bound) {
  return brute_force_hstar(task, enumerate_reachable(task, task.init, bound));
}

}  // namespace plansteps
