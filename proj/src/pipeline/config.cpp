#include <fstream>
#include <set>

#include <fmt/format.h>

#include "plansteps/pipeline.hpp"

namespace plansteps::pipeline {

namespace {

void expect_object(const nlohmann::json& j, std::string_view where) {
  if (!j.is_object()) throw std::invalid_argument(fmt::format("{}: expected an object", where));
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, std::string_view where) {
  expect_object(j, where);
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument(fmt::format("{}: unknown key '{}'", where, key));
}

void check_y(int y, std::string_view where) {
  if (y < 1) throw std::invalid_argument(fmt::format("{}: y must be at least 1", where));
}

void check_probability(double p, std::string_view where) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(fmt::format("{}: p_inapp must be in [0, 1]", where));
}

std::optional<forge::IntRange> range_of(const nlohmann::json& value) {
  if (value.is_number_integer()) return forge::IntRange{value.get<int>(), value.get<int>()};
  if (value.is_string()) return forge::parse_range(value.get<std::string>());
  return std::nullopt;
}

void validate_domain_override(const std::string& id, const nlohmann::json& d) {
  const auto* entry = forge::find_entry(id);
  if (!entry) throw std::invalid_argument(fmt::format("config.domains: unknown domain '{}'", id));
  std::string where = fmt::format("config.domains.{}", id);
  check_keys(d, {"y", "p_inapp", "mopl_bounds", "size_params"}, where);
  if (d.contains("y")) check_y(d.at("y").get<int>(), where);
  if (d.contains("p_inapp")) check_probability(d.at("p_inapp").get<double>(), where);
  if (d.contains("mopl_bounds")) {
    auto b = d.at("mopl_bounds").get<std::vector<int>>();
    if (b.size() != 2 || b[0] < 0 || b[0] > b[1])
      throw std::invalid_argument(where + ": mopl_bounds must be [lo, hi] with 0 <= lo <= hi");
  }
  if (d.contains("size_params")) {
    expect_object(d.at("size_params"), where + ".size_params");
    for (const auto& [knob, value] : d.at("size_params").items()) {
      auto it = entry->size_params.find(knob);
      if (it == entry->size_params.end())
        throw std::invalid_argument(fmt::format("{}: unknown size parameter '{}'", where, knob));
      auto range = range_of(value);
      if (!range || !it->second.contains(*range))
        throw std::invalid_argument(fmt::format("{}: size parameter '{}' must be a range within {}", where, knob,
                                                forge::to_string(it->second)));
    }
  }
}

}  // namespace

DomainConfig PipelineConfig::for_domain(const std::string& domain_id) const {
  DomainConfig out;
  out.y = y;
  out.p_inapp = p_inapp;
  if (const auto* entry = forge::find_entry(domain_id)) out.mopl_bounds = entry->mopl_bounds;
  auto it = domain_overrides.find(domain_id);
  if (it == domain_overrides.end()) return out;
  const nlohmann::json& d = it->second;
  if (d.contains("y")) out.y = d.at("y").get<int>();
  if (d.contains("p_inapp")) out.p_inapp = d.at("p_inapp").get<double>();
  if (d.contains("mopl_bounds")) {
    auto b = d.at("mopl_bounds").get<std::vector<int>>();
    out.mopl_bounds = {b.at(0), b.at(1)};
  }
  if (d.contains("size_params"))
    for (const auto& [knob, value] : d.at("size_params").items()) out.size_params[knob] = *range_of(value);
  return out;
}

nlohmann::ordered_json PipelineConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["y"] = y;
  j["p_inapp"] = p_inapp;
  j["template_dir"] = template_dir;
  j["planner"] = {{"max_expansions", limits.max_expansions},
                  {"max_seconds", static_cast<double>(limits.max_time.count()) / 1000.0}};
  nlohmann::ordered_json domains = nlohmann::ordered_json::object();
  for (const auto& [id, override_json] : domain_overrides) domains[id] = override_json;
  j["domains"] = domains;
  return j;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  PipelineConfig c;
  try {
    check_keys(j, {"seed", "y", "p_inapp", "template_dir", "planner", "domains"}, "config");
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("y")) c.y = j.at("y").get<int>();
    if (j.contains("p_inapp")) c.p_inapp = j.at("p_inapp").get<double>();
    if (j.contains("template_dir")) c.template_dir = j.at("template_dir").get<std::string>();
    if (j.contains("planner")) {
      const auto& p = j.at("planner");
      check_keys(p, {"max_expansions", "max_seconds"}, "config.planner");
      if (p.contains("max_expansions")) c.limits.max_expansions = p.at("max_expansions").get<std::uint64_t>();
      if (p.contains("max_seconds"))
        c.limits.max_time =
            std::chrono::milliseconds(static_cast<long long>(p.at("max_seconds").get<double>() * 1000));
    }
    check_y(c.y, "config");
    check_probability(c.p_inapp, "config");
    if (j.contains("domains")) {
      expect_object(j.at("domains"), "config.domains");
      for (const auto& [id, d] : j.at("domains").items()) {
        validate_domain_override(id, d);
        c.domain_overrides[id] = d;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("config: {}", e.what()));
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("cannot read config {}", path.string()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("{}: {}", path.string(), e.what()));
  }
  return from_json(j);
}

}  // namespace plansteps::pipeline
