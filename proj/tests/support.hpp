#pragma once

// Helpers for tests that drive the command-line tool or need scratch space.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace support {

namespace fs = std::filesystem;

// Fresh, empty directory under the build tree.
inline fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::path(PLANSTEPS_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the tool with `args` (already shell-quoted where needed) from `cwd`.
inline CliResult run_cli(const std::string& args, const fs::path& cwd = PLANSTEPS_TEST_TMP,
                         const std::string& env = "") {
  static int counter = 0;
  fs::path out = fs::path(PLANSTEPS_TEST_TMP) / fmt::format("cli-{}-{}.out", ::getpid(), counter);
  fs::path err = fs::path(PLANSTEPS_TEST_TMP) / fmt::format("cli-{}-{}.err", ::getpid(), counter++);
  fs::create_directories(PLANSTEPS_TEST_TMP);
  std::string command = fmt::format("cd {} && {} {} {} >{} 2>{}", quote(cwd.string()), env, quote(PLANSTEPS_CLI),
                                    args, quote(out.string()), quote(err.string()));
  int status = std::system(command.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

inline nlohmann::json without_runtime(const fs::path& manifest) {
  auto j = nlohmann::json::parse(read_file(manifest));
  j.erase("runtime");
  return j;
}

}  // namespace support
