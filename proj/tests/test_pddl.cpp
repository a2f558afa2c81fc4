#include <algorithm>
#include <functional>

#include "doctest.h"
#include "fixtures.hpp"
#include "plansteps/embedded.hpp"

using namespace plansteps;
using pddl::ErrorKind;
using pddl::ParseError;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("no ParseError thrown");
  return ErrorKind::Syntax;
}

const char* kMinimal = "(define (domain tiny) (:requirements :strips) (:predicates (p))"
                       " (:action go :parameters () :precondition () :effect (p)))";

}  // namespace

TEST_CASE("four-operator blocks world parses to four schemas and five predicates") {
  const auto& d = forge::domain_def("blocksworld4");
  CHECK(d.action_schemas.size() == 4);
  std::vector<std::string> names;
  for (const auto& p : d.predicates) names.push_back(p.name);
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"arm-empty", "clear", "holding", "on", "on-table"});
  CHECK(d.find_schema("stack") != nullptr);
  CHECK(d.find_schema("stack")->parameters.size() == 2);
}

TEST_CASE("smallest well-formed domain") {
  auto d = pddl::parse_domain(kMinimal);
  CHECK(d.name == "tiny");
  REQUIRE(d.action_schemas.size() == 1);
  CHECK(d.action_schemas[0].parameters.empty());
  CHECK(d.action_schemas[0].add_effects == std::vector<pddl::Atom>{{"p", {}}});
}

TEST_CASE("unbalanced parenthesis is a syntax error with a position") {
  std::string text = "(define (domain tiny)\n  (:predicates (p)\n";
  try {
    pddl::parse_domain(text);
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(e.line() >= 1);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK(kind_of([] { pddl::parse_domain("(define (domain x)) )"); }) == ErrorKind::Syntax);
}

TEST_CASE("two-block problem") {
  auto p = fixtures::problem_of("blocksworld4", fixtures::kTwoBlocks4);
  CHECK(p.objects.size() == 2);
  CHECK(p.init.size() == 5);
  CHECK(p.goal == std::vector<pddl::Atom>{{"on", {"a", "b"}}});
  CHECK(std::is_sorted(p.init.begin(), p.init.end()));
}

TEST_CASE("goal with an undeclared predicate") {
  const auto& d = forge::domain_def("blocksworld4");
  try {
    pddl::parse_problem("(define (problem x) (:domain blocksworld4) (:objects a - block) (:init) (:goal (above a a)))",
                        d);
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::UnknownPredicate);
    CHECK(std::string(e.what()).find("unknown predicate") != std::string::npos);
  }
}

TEST_CASE("rooms problem keeps door and light atoms") {
  auto p = fixtures::problem_of("rooms", fixtures::kRoomsLine);
  auto count = [&](const std::string& pred) {
    return std::count_if(p.init.begin(), p.init.end(), [&](const pddl::Atom& a) { return a.predicate == pred; });
  };
  CHECK(count("door") == 4);
  CHECK(count("door-intact") == 4);
  CHECK(count("on") == 2);
}

TEST_CASE("semantic errors carry their kind") {
  const auto& bw = forge::domain_def("blocksworld4");
  auto problem = [&](const std::string& body) {
    return [&bw, text = "(define (problem x) (:domain blocksworld4) " + body + ")"] { pddl::parse_problem(text, bw); };
  };
  CHECK(kind_of(problem("(:objects a - block) (:init (on a)) (:goal (clear a))")) == ErrorKind::ArityMismatch);
  CHECK(kind_of(problem("(:objects a - block) (:init (clear z)) (:goal (clear a))")) == ErrorKind::UnknownObject);
  CHECK(kind_of(problem("(:objects a - ball) (:init) (:goal (clear a))")) == ErrorKind::UnknownType);
  CHECK(kind_of(problem("(:objects a a - block) (:init) (:goal (clear a))")) == ErrorKind::DuplicateName);
  CHECK(kind_of([&] { pddl::parse_problem("(define (problem x) (:domain other) (:init) (:goal (arm-empty)))", bw); }) ==
        ErrorKind::DomainMismatch);

  CHECK(kind_of([] {
          pddl::parse_domain("(define (domain d) (:requirements :strips :typing) (:types a - b b - a) (:predicates (p)))");
        }) == ErrorKind::CyclicTypes);
  CHECK(kind_of([] {
          pddl::parse_domain("(define (domain d) (:requirements :strips) (:constants k) (:predicates (p)))");
        }) == ErrorKind::UnsupportedFeature);
  CHECK(kind_of([] { pddl::parse_domain("(define (domain d) (:requirements :fluents) (:predicates (p)))"); }) ==
        ErrorKind::UnsupportedRequirement);
  CHECK(kind_of([] {
          pddl::parse_domain("(define (domain d) (:requirements :strips) (:types t) (:predicates (p ?x - t)))");
        }) == ErrorKind::MissingRequirement);
  CHECK(kind_of([] {
          pddl::parse_domain("(define (domain d) (:requirements :strips) (:predicates (p ?x))"
                             " (:action a :parameters (?x) :precondition (p ?y) :effect (p ?x)))");
        }) == ErrorKind::UnknownVariable);
  CHECK(kind_of([] {
          pddl::parse_domain("(define (domain d) (:requirements :strips :typing) (:types s t) (:predicates (p ?x - s))"
                             " (:action a :parameters (?x - t) :precondition () :effect (p ?x)))");
        }) == ErrorKind::TypeMismatch);
  CHECK(kind_of([] {
          pddl::parse_domain("(define (domain d) (:requirements :strips) (:predicates (p ?x))"
                             " (:action a :parameters (?x) :precondition (or (p ?x) (p ?x)) :effect (p ?x)))");
        }) == ErrorKind::UnsupportedFeature);
}

TEST_CASE("identifiers are case-insensitive") {
  auto d = pddl::parse_domain("(DEFINE (DOMAIN Tiny) (:REQUIREMENTS :STRIPS) (:PREDICATES (P))"
                              " (:ACTION Go :PARAMETERS () :PRECONDITION () :EFFECT (P)))");
  CHECK(d == pddl::parse_domain(kMinimal));
}

TEST_CASE("rendering round-trips every built-in domain and a generated problem") {
  for (const auto& entry : forge::catalog()) {
    CAPTURE(entry.domain_id);
    const auto& d = forge::domain_def(entry.domain_id);
    auto again = pddl::parse_domain(pddl::render_domain(d));
    CHECK(again == d);
    auto g = forge::generate_instance(entry.domain_id, {}, 3);
    CHECK(pddl::parse_problem(pddl::render_problem(g.problem), d) == g.problem);
  }
}

TEST_CASE("subtype queries follow the declared hierarchy") {
  const auto& d = forge::domain_def("hanoi");
  CHECK(d.is_subtype("disk", "support"));
  CHECK(d.is_subtype("peg", "object"));
  CHECK_FALSE(d.is_subtype("support", "disk"));
}
