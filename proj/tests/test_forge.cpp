#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "plansteps/forge.hpp"
#include "plansteps/search.hpp"

using namespace plansteps;

TEST_CASE("catalog") {
  const auto& cat = forge::catalog();
  CHECK(cat.size() == 11);
  std::set<std::string> ids;
  for (const auto& e : cat) {
    ids.insert(e.domain_id);
    auto d = pddl::parse_domain(e.pddl_text);
    CHECK(d.name == e.domain_id);
    CHECK(e.mopl_bounds == forge::IntRange{2, 15});
    CHECK(forge::find_entry(e.domain_id) == &e);
  }
  CHECK(ids == std::set<std::string>{"blocksworld3", "blocksworld4", "ferry", "hanoi", "logistics", "elevator",
                                     "npuzzle", "visitgrid", "sokoban", "rooms", "spanner"});
  CHECK(forge::find_entry("chess") == nullptr);
  CHECK_THROWS_AS(forge::domain_def("chess"), std::invalid_argument);
}

TEST_CASE("ranges") {
  CHECK(forge::parse_range("3") == forge::IntRange{3, 3});
  CHECK(forge::parse_range("2..5") == forge::IntRange{2, 5});
  CHECK_FALSE(forge::parse_range("5..2"));
  CHECK_FALSE(forge::parse_range("x"));
  CHECK(forge::to_string(forge::IntRange{2, 5}) == "2..5");
}

TEST_CASE("full-stack Hanoi transfer of three disks costs seven") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto g = forge::generate_instance("hanoi", {{"disks", {3, 3}}, {"transfer", {1, 1}}}, seed);
    CHECK(g.optimal_cost == 7);
    auto task = ground(forge::domain_def("hanoi"), g.problem);
    CHECK(oracle::bfs_optimum(task, 100000) == std::optional<int>(7));
  }
}

TEST_CASE("3x3 puzzles are always solvable") {
  for (std::uint64_t seed : {1, 2}) {
    auto g = forge::generate_instance("npuzzle", {{"width", {3, 3}}, {"height", {3, 3}}}, seed);
    auto task = ground(forge::domain_def("npuzzle"), g.problem);
    auto optimum = oracle::bfs_optimum(task, 200000);
    REQUIRE(optimum);
    CHECK(*optimum == g.optimal_cost);
  }
}

TEST_CASE("puzzle parity invariant") {
  CHECK(forge::npuzzle_solvable({1, 2, 3, 4, 5, 6, 7, 8, 0}, 3));
  CHECK_FALSE(forge::npuzzle_solvable({2, 1, 3, 4, 5, 6, 7, 8, 0}, 3));
  CHECK(forge::npuzzle_solvable({1, 2, 3, 0}, 2));
  CHECK_FALSE(forge::npuzzle_solvable({2, 1, 3, 0}, 2));
  CHECK(forge::npuzzle_solvable({1, 0, 3, 2}, 2));  // blank moved up from the solved board
}

TEST_CASE("one-box sokoban from reverse pulls") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto g = forge::generate_instance("sokoban", {{"boxes", {1, 1}}}, seed);
    auto task = ground(forge::domain_def("sokoban"), g.problem);
    auto r = solve_optimal(task, task.init);
    REQUIRE(r.outcome == SearchOutcome::Solved);
    CHECK(r.plan->cost == g.optimal_cost);
    CHECK(g.optimal_cost <= g.sampled_params.at("reverse-steps"));
  }
}

TEST_CASE("every domain yields instances within the plan-length bounds") {
  for (const auto& e : forge::catalog()) {
    CAPTURE(e.domain_id);
    for (std::size_t i = 0; i < 3; ++i) {
      auto g = forge::generate_instance(e.domain_id, {}, forge::instance_seed(5, e.domain_id, i));
      CHECK(e.mopl_bounds.contains(g.optimal_cost));
      auto task = ground(forge::domain_def(e.domain_id), g.problem);
      auto r = solve_optimal(task, task.init);
      CHECK((r.plan && r.plan->cost == g.optimal_cost));
      for (const auto& [knob, range] : e.size_params)
        if (g.sampled_params.count(knob)) CHECK(range.contains(g.sampled_params.at(knob)));
    }
  }
}

TEST_CASE("generation is a function of the seed") {
  auto a = forge::generate_instance("logistics", {}, 77);
  auto b = forge::generate_instance("logistics", {}, 77);
  auto c = forge::generate_instance("logistics", {}, 78);
  CHECK(a.text() == b.text());
  CHECK(a.text() != c.text());
  CHECK(forge::instance_seed(1, "ferry", 0) != forge::instance_seed(1, "ferry", 1));
  CHECK(forge::instance_seed(1, "ferry", 0) != forge::instance_seed(1, "hanoi", 0));
}

TEST_CASE("generated text parses back to the same problem") {
  auto g = forge::generate_instance("spanner", {}, 3);
  auto text = g.text();
  CHECK(text.rfind("; domain=spanner", 0) == 0);
  CHECK(pddl::parse_problem(text, forge::domain_def("spanner")) == g.problem);
}

TEST_CASE("bad requests") {
  CHECK_THROWS_AS(forge::generate_instance("chess", {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(forge::generate_instance("hanoi", {{"pegs", {3, 3}}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(forge::generate_instance("hanoi", {{"disks", {1, 9}}}, 1), std::invalid_argument);
  forge::GenerateOptions tight;
  tight.mopl_bounds = forge::IntRange{14, 15};
  tight.max_attempts = 20;
  try {
    forge::generate_instance("hanoi", {{"disks", {2, 2}}}, 1, tight);
    FAIL("accepted");
  } catch (const forge::GenerationError& e) {
    CHECK(std::string(e.what()).find("[14, 15]") != std::string::npos);
  }
}
