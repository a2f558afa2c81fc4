#include <fstream>

#include <fmt/format.h>

#include "plansteps/pipeline.hpp"

namespace plansteps::pipeline {

nlohmann::ordered_json DatasetRecord::to_json() const {
  nlohmann::ordered_json j;
  j["record_id"] = record_id;
  j["domain_id"] = domain_id;
  j["problem_id"] = problem_id;
  j["problem_nl"] = problem_nl;
  nlohmann::ordered_json prefix = nlohmann::ordered_json::array();
  for (const auto& s : prefix_steps) prefix.push_back({{"text", s.text}, {"reward", s.reward}});
  j["prefix_steps"] = std::move(prefix);
  j["candidate_step"] = candidate_step;
  j["category"] = std::string(to_string(category));
  j["reward"] = reward;
  j["step_index"] = step_index;
  j["meta"] = {{"seed", seed}, {"optimal_cost", optimal_cost}, {"y", y}, {"p_inapp", p_inapp}};
  return j;
}

DatasetRecord DatasetRecord::from_json(const nlohmann::json& j) {
  DatasetRecord r;
  r.record_id = j.at("record_id").get<std::string>();
  r.domain_id = j.at("domain_id").get<std::string>();
  r.problem_id = j.at("problem_id").get<std::string>();
  r.problem_nl = j.at("problem_nl").get<std::string>();
  for (const auto& s : j.at("prefix_steps"))
    r.prefix_steps.push_back({s.at("text").get<std::string>(), s.at("reward").get<double>()});
  r.candidate_step = j.at("candidate_step").get<std::string>();
  auto name = j.at("category").get<std::string>();
  auto category = category_from_string(name);
  if (!category) throw std::invalid_argument(fmt::format("unknown category '{}'", name));
  r.category = *category;
  r.reward = j.at("reward").get<double>();
  if (r.reward != reward_of(r.category))
    throw std::invalid_argument(fmt::format("reward {} does not match category '{}'", r.reward, name));
  r.step_index = j.at("step_index").get<int>();
  const auto& meta = j.at("meta");
  r.seed = meta.at("seed").get<std::uint64_t>();
  r.optimal_cost = meta.at("optimal_cost").get<int>();
  r.y = meta.at("y").get<int>();
  r.p_inapp = meta.at("p_inapp").get<double>();
  return r;
}

void write_records(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  for (const auto& r : records) out << r.to_json().dump() << '\n';
  if (!out) throw std::runtime_error(fmt::format("write to {} failed", path.string()));
}

std::vector<DatasetRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::vector<DatasetRecord> out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(DatasetRecord::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
  return out;
}

}  // namespace plansteps::pipeline
