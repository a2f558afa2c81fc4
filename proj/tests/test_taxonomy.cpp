#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "plansteps/taxonomy.hpp"

using namespace plansteps;
using fixtures::action;
using fixtures::state_of;

TEST_CASE("reward table") {
  CHECK(reward_of(Category::NonExecutable) == 0.0);
  CHECK(reward_of(Category::DeadEnd) == 0.25);
  CHECK(reward_of(Category::Backtracking) == 0.5);
  CHECK(reward_of(Category::Suboptimal) == 0.75);
  CHECK(reward_of(Category::Optimal) == 1.0);
  for (Category c : {Category::NonExecutable, Category::DeadEnd, Category::Backtracking, Category::Suboptimal,
                     Category::Optimal})
    CHECK(category_from_string(to_string(c)) == c);
  CHECK_FALSE(category_from_string("fine"));
}

TEST_CASE("optimal action") {
  SUBCASE("single disk") {
    auto task = fixtures::task_of("hanoi", fixtures::hanoi(1));
    CHECK(task.actions[get_opt_action(task, task.init)].name() == "move(d1,peg1,peg3)");
  }
  SUBCASE("no first action at the goal") {
    auto task = fixtures::task_of("hanoi", fixtures::hanoi(1));
    State goal = apply(task, task.init, get_opt_action(task, task.init));
    CHECK_THROWS_AS(get_opt_action(task, goal), TaxonomyError);
  }
  SUBCASE("head of the planner's plan") {
    auto task = fixtures::task_of("ferry", fixtures::kFerryOneCar);
    auto plan = solve_optimal(task, task.init).plan;
    REQUIRE(plan);
    CHECK(get_opt_action(task, task.init) == plan->actions.front());
    CHECK(task.actions[plan->actions.front()].name() == "board(c,l1)");
  }
}

TEST_CASE("trajectory context") {
  auto task = fixtures::task_of("ferry", fixtures::kFerryOneCar);
  TrajectoryContext ctx(task.init);
  State next = apply(task, task.init, action(task, "sail(l1,l2)"));
  ctx.advance(next);
  CHECK(ctx.step_index() == 1);
  CHECK(ctx.position_of(task.init) == std::optional<std::size_t>(0));
  CHECK_THROWS_AS(ctx.advance(task.init), std::logic_error);
  ctx.move_to(task.init);
  CHECK(ctx.current() == task.init);
  CHECK(ctx.position_of(task.init) == std::optional<std::size_t>(0));
}

TEST_CASE("candidate sampling") {
  auto task = fixtures::task_of("blocksworld3", fixtures::kTwoBlocks3);
  TrajectoryContext ctx(task.init);
  SUBCASE("p_inapp = 0 draws only applicable actions") {
    Rng rng(1);
    for (ActionId a : get_rand_actions(task, ctx, 8, rng, 0.0)) CHECK(is_applicable(task, task.init, a));
  }
  SUBCASE("p_inapp = 1 draws only inapplicable actions") {
    Rng rng(1);
    auto got = get_rand_actions(task, ctx, 100, rng, 1.0);
    CHECK(got.size() == task.actions.size() - 2);
    for (ActionId a : got) CHECK_FALSE(is_applicable(task, task.init, a));
  }
  SUBCASE("same seed, same draw") {
    Rng a(42), b(42);
    CHECK(get_rand_actions(task, ctx, 3, a) == get_rand_actions(task, ctx, 3, b));
  }
  SUBCASE("large y returns every ground action once") {
    Rng rng(7);
    auto got = get_rand_actions(task, ctx, 100, rng);
    std::set<ActionId> unique(got.begin(), got.end());
    CHECK(got.size() == task.actions.size());
    CHECK(unique.size() == task.actions.size());
  }
}

TEST_CASE("classification examples") {
  SUBCASE("picking up a covered block") {
    auto task = fixtures::task_of("blocksworld4", fixtures::kTwoBlocks4);
    TrajectoryContext ctx(state_of(task, {"on(b,a)", "on-table(a)", "clear(b)", "arm-empty"}));
    auto v = eval_action(task, ctx, action(task, "pick-up(a)"));
    CHECK(v.category == Category::NonExecutable);
    CHECK(v.reward == 0.0);
  }
  SUBCASE("sailing away and back") {
    auto task = fixtures::task_of("ferry", fixtures::kFerryStar);
    TrajectoryContext ctx(task.init);
    auto v = eval_action(task, ctx, action(task, "sail(l1,l3)"));
    CHECK(v.category == Category::Backtracking);
    CHECK(v.reward == 0.5);
    CHECK(eval_action(task, ctx, action(task, "sail(l1,l2)")).category == Category::Optimal);
    CHECK(eval_action(task, ctx, action(task, "debark(c,l1)")).category == Category::Backtracking);
  }
  SUBCASE("corridor") {
    auto task = fixtures::task_of("visitgrid", fixtures::kCorridor);
    TrajectoryContext ctx(task.init);
    auto right = eval_action(task, ctx, action(task, "move(c2,c3)"));
    CHECK(right.category == Category::Suboptimal);
    CHECK(right.reward == 0.75);
    auto left = eval_action(task, ctx, action(task, "move(c2,c1)"));
    CHECK(left.category == Category::Optimal);
    CHECK(left.reward == 1.0);
  }
  SUBCASE("breaking the last door to a lit room") {
    auto task = fixtures::task_of("rooms", fixtures::kRoomsLine);
    TrajectoryContext ctx(task.init);
    auto v = eval_action(task, ctx, action(task, "move(me,r2,r1)"));
    CHECK(v.category == Category::DeadEnd);
    CHECK(v.reward == 0.25);
  }
  SUBCASE("every step out of a dead state stays dead") {
    auto task = fixtures::task_of("rooms", fixtures::kRoomsLine);
    State dead = apply(task, task.init, action(task, "move(me,r2,r1)"));
    TrajectoryContext ctx(dead);
    CHECK(eval_action(task, ctx, action(task, "turn-off(me,r1)")).category == Category::DeadEnd);
    CHECK(eval_action(task, ctx, action(task, "move(me,r1,r2)")).category == Category::NonExecutable);
  }
}

TEST_CASE("evaluator caches plans per start state") {
  auto task = fixtures::task_of("ferry", fixtures::kFerryStar);
  ActionEvaluator evaluator(task);
  TrajectoryContext ctx(task.init);
  evaluator.evaluate(ctx, action(task, "sail(l1,l3)"));
  const auto searches = evaluator.searches();
  evaluator.evaluate(ctx, action(task, "sail(l1,l3)"));
  CHECK(evaluator.searches() == searches);
  CHECK(evaluator.cost_to_go(task.init) == std::optional<int>(2));
}

TEST_CASE("budget exhaustion surfaces as PlannerLimitExceeded") {
  auto task = fixtures::task_of("hanoi", fixtures::hanoi(5));
  SearchLimits limits;
  limits.max_expansions = 2;
  ActionEvaluator evaluator(task, HeuristicKind::Blind, limits);
  CHECK_THROWS_AS(evaluator.optimal_action(task.init), PlannerLimitExceeded);
}
