#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "plansteps/pipeline.hpp"

namespace plansteps::pipeline {

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<fs::path> sorted_entries(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

void load_domain_dir(const fs::path& dir, std::vector<ProblemInstance>& out) {
  const fs::path domain_file = dir / "domain.pddl";
  auto domain = std::make_shared<const pddl::DomainDef>(pddl::parse_domain(slurp(domain_file)));
  for (const auto& path : sorted_entries(dir)) {
    if (path.extension() != ".pddl" || path.filename() == "domain.pddl") continue;
    ProblemInstance instance;
    instance.domain_id = domain->name;
    instance.domain = domain;
    try {
      instance.problem = pddl::parse_problem(slurp(path), *domain);
    } catch (const pddl::ParseError& e) {
      throw pddl::ParseError(e.kind(), fmt::format("{}: {}", path.string(), e.what()), e.line(), e.column());
    }
    instance.problem_id = instance.problem.name;
    out.push_back(std::move(instance));
  }
}

}  // namespace

std::vector<ProblemInstance> load_problem_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error(fmt::format("{} is not a directory", dir.string()));
  std::vector<ProblemInstance> out;
  if (fs::exists(dir / "domain.pddl")) {
    load_domain_dir(dir, out);
  } else {
    for (const auto& sub : sorted_entries(dir))
      if (fs::is_directory(sub) && fs::exists(sub / "domain.pddl")) load_domain_dir(sub, out);
  }
  return out;
}

}  // namespace plansteps::pipeline
