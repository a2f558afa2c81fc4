#pragma once

#include <string_view>
#include <vector>

namespace plansteps::embedded {

struct File {
  std::string_view path;  // relative to data/, e.g. "domains/ferry.pddl"
  std::string_view content;
};

const std::vector<File>& files();

}  // namespace plansteps::embedded
