#pragma once

// Run manifests: resolved settings, input/output digests, drops and timing.

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace plansteps {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);
// Digest over the sorted relative paths and file digests of a directory tree.
std::string sha256_tree(const std::filesystem::path& dir);

// Everything except the "runtime" section is a pure function of the inputs
// and the settings, so two runs that differ only in scheduling or output
// location produce equal manifests once "runtime" is removed.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  nlohmann::ordered_json& settings() { return doc_["settings"]; }
  void add_input(const std::string& role, const std::filesystem::path& path);
  // Outputs are listed by file name; the location is runtime detail.
  void add_output(const std::string& role, const std::filesystem::path& path);
  nlohmann::ordered_json& section(const std::string& name) { return doc_[name]; }
  nlohmann::ordered_json& runtime() { return doc_["runtime"]; }

  // Records the wall time of a stage under runtime.timing_seconds.
  void time_stage(const std::string& stage, std::chrono::steady_clock::duration elapsed);

  const nlohmann::ordered_json& json() const { return doc_; }
  void write(const std::filesystem::path& path) const;

 private:
  nlohmann::ordered_json doc_;
};

// "<out>.manifest.json", beside the output so directory digests stay free of
// timing data.
std::filesystem::path manifest_path_for(const std::filesystem::path& out);

}  // namespace plansteps
