#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "plansteps/pipeline.hpp"
#include "support.hpp"

using namespace plansteps;
using namespace plansteps::pipeline;
namespace fs = std::filesystem;

namespace {

ProblemInstance instance_of(const std::string& domain_id, const std::string& text) {
  auto domain = std::make_shared<const pddl::DomainDef>(forge::domain_def(domain_id));
  auto problem = pddl::parse_problem(text, *domain);
  return {domain_id, problem.name, domain, problem};
}

std::vector<ProblemInstance> sample_instances(std::size_t per_domain, std::uint64_t master) {
  std::vector<ProblemInstance> out;
  for (const auto& e : forge::catalog()) {
    auto domain = std::make_shared<const pddl::DomainDef>(forge::domain_def(e.domain_id));
    for (std::size_t i = 0; i < per_domain; ++i) {
      auto g = forge::generate_instance(e.domain_id, {}, forge::instance_seed(master, e.domain_id, i));
      out.push_back({e.domain_id, g.problem.name, domain, g.problem});
    }
  }
  return out;
}

std::string serialized(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const auto& r : records) out += r.to_json().dump() + "\n";
  return out;
}

DatasetRecord bare_record(const std::string& domain, const std::string& problem, int cost) {
  DatasetRecord r;
  r.domain_id = domain;
  r.problem_id = problem;
  r.optimal_cost = cost;
  r.category = Category::Optimal;
  r.reward = 1.0;
  return r;
}

}  // namespace

TEST_CASE("one-car ferry with two candidates per step") {
  PipelineConfig config;
  config.y = 2;
  auto result = generate_instance_records(instance_of("ferry", fixtures::kFerryOneCar), config);
  REQUIRE(result.dropped.empty());
  REQUIRE(result.records.size() == 6);
  std::vector<std::size_t> prefix_lengths;
  for (const auto& r : result.records) {
    prefix_lengths.push_back(r.prefix_steps.size());
    CHECK(r.prefix_steps.size() == static_cast<std::size_t>(r.step_index));
    CHECK(r.optimal_cost == 3);
    CHECK(r.y == 2);
    CHECK(r.reward == reward_of(r.category));
    for (const auto& p : r.prefix_steps) CHECK(p.reward == 1.0);
  }
  CHECK(prefix_lengths == std::vector<std::size_t>{0, 0, 1, 1, 2, 2});
  CHECK(result.records[5].prefix_steps[1].text == "I sail the ferry from l1 to l2.");
  REQUIRE(result.problems.size() == 1);
  CHECK(result.problems[0].records == 6);
}

TEST_CASE("initial state already at the goal yields no records") {
  auto result = generate_instance_records(
      instance_of("ferry", "(define (problem done) (:domain ferry) (:objects l1 - location c - car)"
                           " (:init (at-ferry l1) (empty-ferry) (at c l1)) (:goal (and (at c l1))))"),
      PipelineConfig{});
  CHECK(result.records.empty());
  CHECK(result.dropped.empty());
}

TEST_CASE("planner budget exhaustion drops the whole instance") {
  PipelineConfig config;
  config.limits.max_expansions = 1;
  auto result = generate_instance_records(instance_of("hanoi", fixtures::hanoi(4)), config);
  CHECK(result.records.empty());
  REQUIRE(result.dropped.size() == 1);
  CHECK(result.dropped[0].reason.find("planner limit") != std::string::npos);
}

TEST_CASE("unsolvable instance is dropped") {
  auto result = generate_instance_records(
      instance_of("rooms", "(define (problem cut) (:domain rooms) (:objects me - agent r1 r2 - room)"
                           " (:init (at me r2) (on r1) (door r1 r2) (door r2 r1)) (:goal (and (off r1))))"),
      PipelineConfig{});
  CHECK(result.records.empty());
  REQUIRE(result.dropped.size() == 1);
}

TEST_CASE("record ids") {
  CHECK(make_record_id("ferry-1", 2, "board(c,l1)") == "ferry-1:2:board(c,l1)");
  PipelineConfig config;
  auto result = generate_instance_records(instance_of("ferry", fixtures::kFerryOneCar), config);
  std::set<std::string> ids;
  for (const auto& r : result.records) ids.insert(r.record_id);
  CHECK(ids.size() == result.records.size());
}

TEST_CASE("parallel generation matches the serial reference") {
  auto instances = sample_instances(2, 31);
  PipelineConfig config;
  config.seed = 5;
  const auto reference = generate_dataset_serial(instances, config);
  CHECK_FALSE(reference.records.empty());
  for (int workers : {1, 2, 4}) {
    auto parallel = generate_dataset(instances, config, workers);
    CHECK(serialized(parallel.records) == serialized(reference.records));
    CHECK(parallel.problems.size() == reference.problems.size());
  }
  std::reverse(instances.begin(), instances.end());
  CHECK(serialized(generate_dataset(instances, config, 3).records) == serialized(reference.records));

  config.seed = 6;
  CHECK(serialized(generate_dataset(instances, config, 2).records) != serialized(reference.records));
}

TEST_CASE("duplicate problems are rejected") {
  auto one = instance_of("ferry", fixtures::kFerryOneCar);
  CHECK_THROWS_AS(generate_dataset({one, one}, PipelineConfig{}, 1), std::invalid_argument);
}

TEST_CASE("records round-trip through JSON lines") {
  auto result = generate_instance_records(instance_of("ferry", fixtures::kFerryOneCar), PipelineConfig{});
  auto dir = support::scratch_dir("pipeline-records");
  write_records(dir / "r.jsonl", result.records);
  auto back = read_records(dir / "r.jsonl");
  CHECK(serialized(back) == serialized(result.records));

  auto j = result.records[0].to_json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"record_id", "domain_id", "problem_id", "problem_nl", "prefix_steps",
                                         "candidate_step", "category", "reward", "step_index", "meta"});

  auto bad = j;
  bad["reward"] = 0.5;
  bad["category"] = "optimal";
  CHECK_THROWS_AS(DatasetRecord::from_json(bad), std::invalid_argument);

  support::write_file(dir / "bad.jsonl", j.dump() + "\n{not json\n");
  try {
    read_records(dir / "bad.jsonl");
    FAIL("accepted");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
}

TEST_CASE("configuration") {
  auto config = PipelineConfig::from_json(nlohmann::json::parse(R"({
    "seed": 9, "y": 4, "p_inapp": 0.5,
    "planner": {"max_expansions": 1000, "max_seconds": 2},
    "domains": {"ferry": {"y": 6, "size_params": {"cars": "1..2"}}}
  })"));
  CHECK(config.seed == 9);
  CHECK(config.for_domain("hanoi").y == 4);
  CHECK(config.for_domain("hanoi").p_inapp == 0.5);
  CHECK(config.for_domain("ferry").y == 6);
  CHECK(config.for_domain("ferry").p_inapp == 0.5);
  CHECK(config.for_domain("ferry").size_params.at("cars") == forge::IntRange{1, 2});
  CHECK(config.limits.max_expansions == 1000);
  CHECK(PipelineConfig::from_json(config.to_json()).to_json() == config.to_json());

  auto rejects = [](const char* text) {
    CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(text)), std::invalid_argument);
  };
  rejects(R"({"sed": 1})");
  rejects(R"({"y": 0})");
  rejects(R"({"p_inapp": 1.5})");
  rejects(R"({"y": "eight"})");
  rejects(R"({"domains": {"chess": {}}})");
  rejects(R"({"domains": {"ferry": {"size_params": {"cars": "1..9"}}}})");
  rejects(R"({"domains": {"ferry": {"colour": 1}}})");
}

TEST_CASE("problem directories") {
  auto dir = support::scratch_dir("pipeline-problems");
  auto write_domain = [](const fs::path& d, const std::string& id) {
    fs::create_directories(d);
    support::write_file(d / "domain.pddl", std::string(forge::find_entry(id)->pddl_text));
  };
  write_domain(dir / "ferry", "ferry");
  support::write_file(dir / "ferry" / "b.pddl", fixtures::kFerryOneCar);
  support::write_file(dir / "ferry" / "a.pddl", fixtures::kFerryStar);
  write_domain(dir / "hanoi", "hanoi");
  support::write_file(dir / "hanoi" / "h3.pddl", fixtures::hanoi(3));

  auto all = load_problem_dir(dir);
  REQUIRE(all.size() == 3);
  CHECK(all[0].domain_id == "ferry");
  CHECK(all[0].problem_id == "ferry-star");  // a.pddl sorts first
  CHECK(all[1].problem_id == "ferry-1");
  CHECK(all[2].domain_id == "hanoi");
  CHECK(load_problem_dir(dir / "hanoi").size() == 1);

  support::write_file(dir / "hanoi" / "broken.pddl", "(define (problem x) (:domain hanoi)");
  try {
    load_problem_dir(dir);
    FAIL("accepted");
  } catch (const pddl::ParseError& e) {
    CHECK(std::string(e.what()).find("broken.pddl") != std::string::npos);
  }
  CHECK_THROWS(load_problem_dir(dir / "missing"));
}

TEST_CASE("splits") {
  std::vector<ProblemKey> problems;
  for (int i = 0; i < 100; ++i) problems.push_back({i % 2 ? "ferry" : "hanoi", fmt::format("p{}", i)});
  for (int i = 0; i < 20; ++i) problems.push_back({"rooms", fmt::format("r{}", i)});
  auto assignment = assign_splits(problems, SplitRatios{}, "rooms", 7);
  std::map<Split, int> counts;
  for (const auto& [key, s] : assignment) {
    if (key.domain_id == "rooms") CHECK(s == Split::Holdout);
    else ++counts[s];
  }
  CHECK(counts[Split::Train] == 85);
  CHECK(counts[Split::Val] == 5);
  CHECK(counts[Split::Test] == 10);
  CHECK(assign_splits(problems, SplitRatios{}, "rooms", 7) == assignment);
  CHECK(assign_splits(problems, SplitRatios{}, "rooms", 8) != assignment);

  CHECK_THROWS_AS(assign_splits(problems, SplitRatios{}, "kitchen", 7), std::invalid_argument);
  CHECK_THROWS_AS(assign_splits(problems, SplitRatios{0.5, 0.2, 0.2}, "rooms", 7), std::invalid_argument);

  auto dir = support::scratch_dir("pipeline-splits");
  write_splits(dir / "s.jsonl", assignment);
  CHECK(read_splits(dir / "s.jsonl") == assignment);
  CHECK(to_string(Split::Holdout) == "holdout");
}

TEST_CASE("split counts stay within one of the exact proportions") {
  for (int n : {1, 7, 19, 33, 101}) {
    std::vector<ProblemKey> problems;
    for (int i = 0; i < n; ++i) problems.push_back({"ferry", fmt::format("p{}", i)});
    std::map<Split, int> counts;
    for (const auto& [key, s] : assign_splits(problems, SplitRatios{}, "rooms", 1)) ++counts[s];
    CHECK(std::abs(counts[Split::Train] - 0.85 * n) <= 1.0);
    CHECK(std::abs(counts[Split::Val] - 0.05 * n) <= 1.0);
    CHECK(std::abs(counts[Split::Test] - 0.10 * n) <= 1.0);
  }
}

TEST_CASE("statistics") {
  SUBCASE("mean optimal plan length over problems") {
    std::vector<DatasetRecord> records{bare_record("ferry", "a", 3), bare_record("ferry", "a", 3),
                                       bare_record("ferry", "b", 5)};
    auto s = stats(records);
    REQUIRE(s.rows.size() == 1);
    CHECK(s.rows[0].problems == 2);
    CHECK(s.rows[0].mopl == 4.0);
    CHECK(s.rows[0].total_steps == 3);
    CHECK(s.rows[0].display_name == "Ferry");
  }
  SUBCASE("rows follow the catalog; totals average over problems") {
    std::vector<DatasetRecord> records{bare_record("hanoi", "h", 7), bare_record("ferry", "a", 3),
                                       bare_record("ferry", "b", 5)};
    auto s = stats(records);
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].domain_id == "ferry");
    CHECK(s.totals.problems == 3);
    CHECK(s.totals.mopl == doctest::Approx(5.0));
    CHECK(s.totals.total_steps == 3);
    auto table = format_stats(s);
    CHECK(table.find("Domain") != std::string::npos);
    CHECK(table.find("Total") != std::string::npos);
    CHECK(stats_to_json(s)["rows"].size() == 2);
  }
  SUBCASE("empty input") {
    auto s = stats({});
    CHECK(s.rows.empty());
    CHECK(s.totals.problems == 0);
    CHECK(s.totals.mopl == 0.0);
    CHECK(s.totals.total_steps == 0);
    CHECK(format_stats(s).find("Total") != std::string::npos);
  }
}
