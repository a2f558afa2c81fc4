#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "plansteps/search.hpp"

using namespace plansteps;
using fixtures::action;
using fixtures::state_of;

namespace {

// Agent in r2 with the r1-r2 door already broken while r1 is still lit.
State rooms_cut_off(const GroundTask& task) {
  return state_of(task, {"at(me,r2)", "on(r1)", "on(r3)", "door(r1,r2)", "door(r2,r1)", "door(r2,r3)", "door(r3,r2)",
                         "door-intact(r2,r3)", "door-intact(r3,r2)"});
}

}  // namespace

TEST_CASE("Hanoi with three disks costs seven under every heuristic") {
  auto task = fixtures::task_of("hanoi", fixtures::hanoi(3));
  for (HeuristicKind kind : {HeuristicKind::LmCut, HeuristicKind::HMax, HeuristicKind::Blind}) {
    CAPTURE(to_string(kind));
    auto r = solve_optimal(task, task.init, kind);
    REQUIRE(r.outcome == SearchOutcome::Solved);
    CHECK(r.plan->cost == 7);
    CHECK(r.plan->actions.size() == 7);
    CHECK(r.plan->state_trace.size() == 8);
    CHECK(first_plan_violation(task, task.init, r.plan->actions) == std::nullopt);
  }
}

TEST_CASE("goal state: empty plan") {
  auto task = fixtures::task_of("hanoi", fixtures::hanoi(2));
  State goal = state_of(task, {"on(d1,d2)", "on(d2,peg3)", "clear(d1)", "clear(peg1)", "clear(peg2)", "smaller(d1,d2)",
                               "smaller(d1,peg1)", "smaller(d1,peg2)", "smaller(d1,peg3)", "smaller(d2,peg1)",
                               "smaller(d2,peg2)", "smaller(d2,peg3)"});
  REQUIRE(task.is_goal(goal));
  auto r = solve_optimal(task, goal);
  REQUIRE(r.plan);
  CHECK(r.plan->actions.empty());
  CHECK(r.plan->cost == 0);
  CHECK(h_max(task, goal) == 0);
  CHECK(h_lmcut(task, goal) == 0);
}

TEST_CASE("rooms cut off from a lit room is unsolvable") {
  auto task = fixtures::task_of("rooms", fixtures::kRoomsLine);
  State s = rooms_cut_off(task);
  auto r = solve_optimal(task, s);
  CHECK(r.outcome == SearchOutcome::Unsolvable);
  CHECK_FALSE(r.plan);
  CHECK(h_max(task, s) == kInfinity);
  CHECK(h_lmcut(task, s) == kInfinity);
  CHECK(brute_force_hstar(task, enumerate_reachable(task, s)).count(s) == 0);
}

TEST_CASE("heuristics on the one-car ferry stay below the true cost") {
  auto task = fixtures::task_of("ferry", fixtures::kFerryOneCar);
  auto table = brute_force_hstar(task);
  REQUIRE(table.at(task.init) == 3);
  CHECK(h_max(task, task.init) <= 3);
  CHECK(h_lmcut(task, task.init) <= 3);
  CHECK(h_lmcut(task, task.init) >= h_max(task, task.init));
}

TEST_CASE("goal fact without an achiever is infinitely far") {
  auto task = fixtures::task_of("ferry",
                                "(define (problem u) (:domain ferry) (:objects l1 l2 - location c - car)"
                                " (:init (at-ferry l1) (empty-ferry) (at c l1) (link l1 l2)) (:goal (and (at c l2) (on c) (at-ferry l2) (link l2 l1))))");
  CHECK(h_max(task, task.init) == kInfinity);
  CHECK(h_lmcut(task, task.init) == kInfinity);
  CHECK(solve_optimal(task, task.init).outcome == SearchOutcome::Unsolvable);
}

TEST_CASE("admissibility on every state of two-block blocks world") {
  auto task = fixtures::task_of("blocksworld4", fixtures::kTwoBlocks4);
  auto space = oracle::explore(task, 1000);
  REQUIRE(space);
  auto h = oracle::hstar(task, *space);
  for (std::size_t i = 0; i < space->states.size(); ++i) {
    if (h[i] == oracle::kUnreachable) continue;
    CHECK(h_max(task, space->states[i]) <= h[i]);
    CHECK(h_lmcut(task, space->states[i]) <= h[i]);
  }
}

TEST_CASE("brute-force cost-to-go") {
  SUBCASE("Hanoi with two disks") {
    auto task = fixtures::task_of("hanoi", fixtures::hanoi(2));
    CHECK(brute_force_hstar(task).at(task.init) == 3);
  }
  SUBCASE("corridor detour") {
    auto task = fixtures::task_of("visitgrid", fixtures::kCorridor);
    CHECK(brute_force_hstar(task).at(task.init) == 4);
  }
  SUBCASE("agrees with the independent table") {
    auto task = fixtures::task_of("rooms", fixtures::kRoomsLine);
    auto space = oracle::explore(task, 1000);
    REQUIRE(space);
    auto h = oracle::hstar(task, *space);
    auto table = brute_force_hstar(task);
    for (std::size_t i = 0; i < space->states.size(); ++i) {
      auto it = table.find(space->states[i]);
      if (h[i] == oracle::kUnreachable) CHECK(it == table.end());
      else CHECK((it != table.end() && it->second == h[i]));
    }
  }
  SUBCASE("refuses spaces over the bound") {
    auto task = fixtures::task_of("hanoi", fixtures::hanoi(4));
    CHECK_THROWS_AS(brute_force_hstar(task, 10), StateSpaceTooLarge);
  }
}

TEST_CASE("search stops at the expansion budget") {
  auto task = fixtures::task_of("hanoi", fixtures::hanoi(5));
  SearchLimits limits;
  limits.max_expansions = 3;
  auto r = solve_optimal(task, task.init, HeuristicKind::Blind, limits);
  CHECK(r.outcome == SearchOutcome::ResourceLimit);
  CHECK_FALSE(r.plan);
}

TEST_CASE("plans are reproducible") {
  auto g = forge::generate_instance("logistics", {}, 4);
  auto task = ground(forge::domain_def("logistics"), g.problem);
  auto a = solve_optimal(task, task.init);
  auto b = solve_optimal(task, task.init);
  REQUIRE(a.plan);
  CHECK(a.plan->actions == b.plan->actions);
  CHECK(a.expansions == b.expansions);
}

TEST_CASE("plan validation reports the first problem") {
  auto task = fixtures::task_of("ferry", fixtures::kFerryOneCar);
  std::vector<ActionId> good{action(task, "board(c,l1)"), action(task, "sail(l1,l2)"), action(task, "debark(c,l2)")};
  CHECK(first_plan_violation(task, task.init, good) == std::nullopt);
  std::vector<ActionId> wrong_order{action(task, "sail(l1,l2)"), action(task, "board(c,l1)")};
  CHECK(first_plan_violation(task, task.init, wrong_order) == std::optional<std::size_t>(1));
  std::vector<ActionId> short_of_goal{action(task, "board(c,l1)")};
  CHECK(first_plan_violation(task, task.init, short_of_goal) == std::optional<std::size_t>(1));
}

TEST_CASE("heuristic names") {
  CHECK(heuristic_from_string("lmcut") == HeuristicKind::LmCut);
  CHECK(heuristic_from_string("hmax") == HeuristicKind::HMax);
  CHECK(heuristic_from_string("blind") == HeuristicKind::Blind);
  CHECK_FALSE(heuristic_from_string("ff"));
}
