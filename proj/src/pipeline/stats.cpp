#include <algorithm>
#include <array>
#include <map>

#include <fmt/format.h>

#include "plansteps/pipeline.hpp"

namespace plansteps::pipeline {

namespace {

std::string thousands(std::size_t n) {
  std::string digits = std::to_string(n), out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

}  // namespace

DomainStats stats(const std::vector<DatasetRecord>& records) {
  struct Acc {
    std::map<std::string, int> costs;  // problem -> optimal cost
    std::size_t steps = 0;
  };
  std::map<std::string, Acc> by_domain;
  for (const auto& r : records) {
    Acc& acc = by_domain[r.domain_id];
    acc.costs.emplace(r.problem_id, r.optimal_cost);
    ++acc.steps;
  }

  std::vector<std::string> order;
  for (const auto& e : forge::catalog())
    if (by_domain.count(e.domain_id)) order.push_back(e.domain_id);
  for (const auto& [id, acc] : by_domain)
    if (!forge::find_entry(id)) order.push_back(id);

  DomainStats out;
  out.totals.domain_id = "total";
  out.totals.display_name = "Total";
  double cost_sum = 0;
  for (const auto& id : order) {
    const Acc& acc = by_domain.at(id);
    DomainRow row;
    row.domain_id = id;
    const auto* entry = forge::find_entry(id);
    row.display_name = entry ? entry->display_name : id;
    row.problems = acc.costs.size();
    double sum = 0;
    for (const auto& [p, c] : acc.costs) sum += c;
    row.mopl = sum / static_cast<double>(row.problems);
    row.total_steps = acc.steps;
    cost_sum += sum;
    out.totals.problems += row.problems;
    out.totals.total_steps += row.total_steps;
    out.rows.push_back(std::move(row));
  }
  if (out.totals.problems > 0) out.totals.mopl = cost_sum / static_cast<double>(out.totals.problems);
  return out;
}

std::string format_stats(const DomainStats& s) {
  std::vector<std::array<std::string, 4>> lines;
  lines.push_back({"Domain", "Problems", "MOPL", "Total steps"});
  auto cells = [](const DomainRow& r) {
    return std::array<std::string, 4>{r.display_name, thousands(r.problems), fmt::format("{:.2f}", r.mopl),
                                      thousands(r.total_steps)};
  };
  for (const auto& r : s.rows) lines.push_back(cells(r));
  lines.push_back(cells(s.totals));

  std::array<std::size_t, 4> width{};
  for (const auto& l : lines)
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], l[c].size());
  auto format_line = [&](const std::array<std::string, 4>& l) {
    return fmt::format("{:<{}} | {:>{}} | {:>{}} | {:>{}}\n", l[0], width[0], l[1], width[1], l[2], width[2], l[3],
                       width[3]);
  };
  std::string rule = fmt::format("{}-+-{}-+-{}-+-{}\n", std::string(width[0], '-'), std::string(width[1], '-'),
                                 std::string(width[2], '-'), std::string(width[3], '-'));
  std::string out = format_line(lines.front()) + rule;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) out += format_line(lines[i]);
  out += rule + format_line(lines.back());
  return out;
}

nlohmann::ordered_json stats_to_json(const DomainStats& s) {
  auto row_json = [](const DomainRow& r) {
    nlohmann::ordered_json j;
    j["domain_id"] = r.domain_id;
    j["display_name"] = r.display_name;
    j["problems"] = r.problems;
    j["mopl"] = r.mopl;
    j["total_steps"] = r.total_steps;
    return j;
  };
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : s.rows) j["rows"].push_back(row_json(r));
  j["totals"] = row_json(s.totals);
  return j;
}

}  // namespace plansteps::pipeline
