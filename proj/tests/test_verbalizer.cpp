#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "plansteps/verbalizer.hpp"

using namespace plansteps;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("two-block problem") {
  auto p = fixtures::problem_of("blocksworld4", fixtures::kTwoBlocks4);
  CHECK(verbal::render_problem("blocksworld4", p) ==
        "There are 2 blocks: a, b. Initially, a is on the table; b is on the table; both are clear; the arm is "
        "empty. Goal: a is on b.");
}

TEST_CASE("empty goal") {
  auto p = fixtures::problem_of(
      "blocksworld4",
      "(define (problem e) (:domain blocksworld4) (:objects a - block) (:init (on-table a) (clear a) (arm-empty)) (:goal (and)))");
  auto text = verbal::render_problem("blocksworld4", p);
  const std::string ending = "Goal: (already satisfied).";
  REQUIRE(text.size() >= ending.size());
  CHECK(text.substr(text.size() - ending.size()) == ending);
}

TEST_CASE("rooms text mentions each door and lit room once") {
  auto p = fixtures::problem_of("rooms", fixtures::kRoomsLine);
  auto text = verbal::render_problem("rooms", p);
  for (const auto& a : p.init) {
    if (a.predicate == "door") CHECK(occurrences(text, "a door connects " + a.args[0] + " to " + a.args[1]) == 1);
    if (a.predicate == "on") CHECK(occurrences(text, "the light in " + a.args[0] + " is on") == 1);
  }
}

TEST_CASE("step sentences") {
  auto bw = fixtures::task_of("blocksworld4", fixtures::kTwoBlocks4);
  CHECK(verbal::Verbalizer("blocksworld4").render_step(bw, fixtures::action(bw, "pick-up(a)")) ==
        "I pick up block a from the table.");
  auto ferry = fixtures::task_of("ferry", fixtures::kFerryOneCar);
  CHECK(verbal::Verbalizer("ferry").render_step(ferry, fixtures::action(ferry, "sail(l1,l2)")) ==
        "I sail the ferry from l1 to l2.");
}

TEST_CASE("sentences are independent of state and verdict") {
  auto task = fixtures::task_of("blocksworld4", fixtures::kTwoBlocks4);
  ActionId a = fixtures::action(task, "stack(a,b)");
  State other = apply(task, task.init, fixtures::action(task, "pick-up(a)"));
  CHECK(verbal::render_step("blocksworld4", task, task.init, a) == verbal::render_step("blocksworld4", task, other, a));
  auto text = verbal::render_step("blocksworld4", task, task.init, a);
  for (const char* leak : {"reward", "optimal", "dead", "0.5", "inapplicable"})
    CHECK(text.find(leak) == std::string::npos);
}

TEST_CASE("distinct actions get distinct sentences") {
  for (const auto& e : forge::catalog()) {
    CAPTURE(e.domain_id);
    for (std::uint64_t seed : {1, 2}) {
      auto g = forge::generate_instance(e.domain_id, {}, seed);
      auto task = ground(forge::domain_def(e.domain_id), g.problem);
      verbal::Verbalizer v(e.domain_id);
      std::set<std::string> sentences;
      for (const auto& act : task.actions) sentences.insert(v.render_step(task, act.id));
      CHECK(sentences.size() == task.actions.size());
      auto index = v.step_index(task);
      for (const auto& act : task.actions) CHECK(index.at(v.render_step(task, act.id)) == act.id);
    }
  }
}

TEST_CASE("template files") {
  const auto& d = forge::domain_def("visitgrid");
  auto ok = verbal::TemplateSet::parse("visitgrid",
                                       "# comment\n"
                                       "type place = cell | cells\n"
                                       "fact at-robot = the robot is at {arg1}\n"
                                       "fact visited = {arg1} was visited\n"
                                       "fact connected = {arg1} leads to {arg2}\n"
                                       "step move = I go from {arg1} to {arg2}.\n");
  CHECK_NOTHROW(ok.validate(d));
  CHECK(verbal::Verbalizer(d, ok).render_step("move", {"x", "y"}) == "I go from x to y.");

  auto missing = verbal::TemplateSet::parse("visitgrid", "type place = cell | cells\nstep move = I go.\n");
  CHECK_THROWS_AS(missing.validate(d), verbal::TemplateError);
  CHECK_THROWS_AS(verbal::TemplateSet::parse("visitgrid", "nonsense line\n"), verbal::TemplateError);
  CHECK_THROWS_AS(verbal::load_templates("visitgrid", "/nonexistent-template-dir"), std::exception);
}

TEST_CASE("every built-in template set covers its domain") {
  for (const auto& e : forge::catalog()) {
    CAPTURE(e.domain_id);
    CHECK_NOTHROW(verbal::load_templates(e.domain_id).validate(forge::domain_def(e.domain_id)));
  }
}
