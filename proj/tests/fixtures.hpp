#pragma once

// Small hand-written tasks shared by the unit tests.

#include <initializer_list>
#include <stdexcept>
#include <string>

#include "plansteps/forge.hpp"
#include "plansteps/grounder.hpp"
#include "plansteps/pddl.hpp"

namespace fixtures {

using namespace plansteps;

inline pddl::ProblemDef problem_of(std::string_view domain_id, const std::string& text) {
  return pddl::parse_problem(text, forge::domain_def(domain_id));
}

inline GroundTask task_of(std::string_view domain_id, const std::string& text) {
  return ground(forge::domain_def(domain_id), problem_of(domain_id, text));
}

// "on(a,b)" -> atom.
inline pddl::Atom atom(const std::string& text) {
  pddl::Atom a;
  auto open = text.find('(');
  a.predicate = text.substr(0, open);
  if (open == std::string::npos) return a;
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size() && !inner.empty()) {
    auto comma = inner.find(',', start);
    a.args.push_back(inner.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return a;
}

inline State state_of(const GroundTask& task, std::initializer_list<const char*> facts) {
  State s(task.num_facts());
  for (const char* f : facts) {
    auto id = task.find_fact(atom(f));
    if (!id) throw std::invalid_argument(std::string("no fact ") + f);
    s.set(*id);
  }
  return s;
}

inline ActionId action(const GroundTask& task, std::string_view name) {
  auto id = task.find_action(name);
  if (!id) throw std::invalid_argument("no action " + std::string(name));
  return *id;
}

inline std::string hanoi(int n) {
  std::string objects, init, goal;
  for (int d = 1; d <= n; ++d) {
    objects += " d" + std::to_string(d);
    for (int e = d + 1; e <= n; ++e) init += " (smaller d" + std::to_string(d) + " d" + std::to_string(e) + ")";
    for (int p = 1; p <= 3; ++p) init += " (smaller d" + std::to_string(d) + " peg" + std::to_string(p) + ")";
    const std::string below = d == n ? "peg1" : "d" + std::to_string(d + 1);
    const std::string goal_below = d == n ? "peg3" : "d" + std::to_string(d + 1);
    init += " (on d" + std::to_string(d) + " " + below + ")";
    goal += " (on d" + std::to_string(d) + " " + goal_below + ")";
  }
  return "(define (problem hanoi-" + std::to_string(n) + ") (:domain hanoi) (:objects" + objects +
         " - disk peg1 peg2 peg3 - peg) (:init" + init + " (clear d1) (clear peg2) (clear peg3)) (:goal (and" + goal +
         ")))";
}

// Ferry and car at l1, car wanted at l2: board, sail, debark (cost 3).
inline const char* kFerryOneCar =
    "(define (problem ferry-1) (:domain ferry)"
    " (:objects l1 l2 - location c - car)"
    " (:init (at-ferry l1) (empty-ferry) (at c l1) (link l1 l2) (link l2 l1))"
    " (:goal (and (at c l2))))";

// Links only l1<->l2 and l1<->l3, the car aboard at l1, wanted at l2.
inline const char* kFerryStar =
    "(define (problem ferry-star) (:domain ferry)"
    " (:objects l1 l2 l3 - location c - car)"
    " (:init (at-ferry l1) (on c) (link l1 l2) (link l2 l1) (link l1 l3) (link l3 l1))"
    " (:goal (and (at c l2))))";

// 1x4 corridor c1-c2-c3-c4, robot at c2, targets c1 and c4.
inline const char* kCorridor =
    "(define (problem corridor) (:domain visitgrid)"
    " (:objects c1 c2 c3 c4 - place)"
    " (:init (at-robot c2) (visited c2)"
    "  (connected c1 c2) (connected c2 c1) (connected c2 c3) (connected c3 c2) (connected c3 c4) (connected c4 c3))"
    " (:goal (and (visited c1) (visited c4))))";

inline const char* kTwoBlocks4 =
    "(define (problem bw-2) (:domain blocksworld4)"
    " (:objects a b - block)"
    " (:init (on-table a) (on-table b) (clear a) (clear b) (arm-empty))"
    " (:goal (and (on a b))))";

inline const char* kTwoBlocks3 =
    "(define (problem bw-2) (:domain blocksworld3)"
    " (:objects a b - block)"
    " (:init (on-table a) (on-table b) (clear a) (clear b))"
    " (:goal (and (on a b))))";

// r1 - r2 - r3 in a line, agent in r2, lights on in r1 and r3.
inline const char* kRoomsLine =
    "(define (problem rooms-line) (:domain rooms)"
    " (:objects me - agent r1 r2 r3 - room)"
    " (:init (at me r2) (on r1) (on r3)"
    "  (door r1 r2) (door r2 r1) (door r2 r3) (door r3 r2)"
    "  (door-intact r1 r2) (door-intact r2 r1) (door-intact r2 r3) (door-intact r3 r2))"
    " (:goal (and (off r1) (off r3))))";

}  // namespace fixtures
