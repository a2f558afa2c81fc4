#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "plansteps/pipeline.hpp"
#include "plansteps/rng.hpp"

namespace plansteps::pipeline {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    case Split::Holdout: return "holdout";
  }
  return "?";
}

namespace {

std::optional<Split> split_from_string(std::string_view name) {
  for (Split s : {Split::Train, Split::Val, Split::Test, Split::Holdout})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

}  // namespace

SplitAssignment assign_splits(std::vector<ProblemKey> problems, const SplitRatios& ratios,
                              const std::string& holdout_domain, std::uint64_t seed) {
  if (!forge::find_entry(holdout_domain))
    throw std::invalid_argument(fmt::format("unknown holdout domain '{}'", holdout_domain));
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must be non-negative and sum to 1");

  std::sort(problems.begin(), problems.end());
  problems.erase(std::unique(problems.begin(), problems.end()), problems.end());

  SplitAssignment out;
  std::vector<ProblemKey> pool;
  for (auto& p : problems) {
    if (p.domain_id == holdout_domain) out.emplace(std::move(p), Split::Holdout);
    else pool.push_back(std::move(p));
  }
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(pool);
  const auto n = static_cast<double>(pool.size());
  auto n_val = static_cast<std::size_t>(std::llround(n * ratios.val));
  auto n_test = static_cast<std::size_t>(std::llround(n * ratios.test));
  n_val = std::min(n_val, pool.size());
  n_test = std::min(n_test, pool.size() - n_val);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    Split s = i < n_val ? Split::Val : i < n_val + n_test ? Split::Test : Split::Train;
    out.emplace(std::move(pool[i]), s);
  }
  return out;
}

SplitAssignment split(const std::vector<DatasetRecord>& records, const SplitRatios& ratios,
                      const std::string& holdout_domain, std::uint64_t seed) {
  std::vector<ProblemKey> problems;
  for (const auto& r : records) problems.push_back({r.domain_id, r.problem_id});
  return assign_splits(std::move(problems), ratios, holdout_domain, seed);
}

void write_splits(const std::filesystem::path& path, const SplitAssignment& assignment) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  for (const auto& [key, s] : assignment) {
    nlohmann::ordered_json j;
    j["domain_id"] = key.domain_id;
    j["problem_id"] = key.problem_id;
    j["split"] = std::string(to_string(s));
    out << j.dump() << '\n';
  }
}

SplitAssignment read_splits(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  SplitAssignment out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      auto name = j.at("split").get<std::string>();
      auto s = split_from_string(name);
      if (!s) throw std::invalid_argument(fmt::format("unknown split '{}'", name));
      ProblemKey key{j.at("domain_id").get<std::string>(), j.at("problem_id").get<std::string>()};
      if (!out.emplace(key, *s).second) throw std::invalid_argument(fmt::format("{} listed twice", key.problem_id));
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
  return out;
}

}  // namespace plansteps::pipeline
