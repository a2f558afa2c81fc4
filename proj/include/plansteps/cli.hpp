#pragma once

// Command-line entry point shared by the executable and the tests.

#include <string>
#include <vector>

namespace plansteps::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;  // unsolvable, parse failure, invalid plan, bad input
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv);
// Arguments after the program name.
int run(const std::vector<std::string>& args);

}  // namespace plansteps::cli
