#include "plansteps/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace plansteps {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) throw std::runtime_error("SHA-256 init failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx_, data, size) != 1) throw std::runtime_error("SHA-256 update failed");
  }
  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int size = 0;
    if (EVP_DigestFinal_ex(ctx_, digest, &size) != 1) throw std::runtime_error("SHA-256 final failed");
    std::string out;
    for (unsigned int i = 0; i < size; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  Sha256 h;
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    h.update(buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string sha256_tree(const std::filesystem::path& dir) {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(std::filesystem::relative(e.path(), dir).generic_string());
  std::sort(files.begin(), files.end());
  Sha256 h;
  for (const auto& f : files) {
    std::string line = fmt::format("{}  {}\n", sha256_file(dir / f), f);
    h.update(line.data(), line.size());
  }
  return h.hex();
}

RunManifest::RunManifest(std::string command) {
  doc_["tool"] = "plansteps";
  doc_["version"] = std::string(kToolVersion);
  doc_["command"] = std::move(command);
  doc_["settings"] = nlohmann::ordered_json::object();
  doc_["inputs"] = nlohmann::ordered_json::array();
  doc_["outputs"] = nlohmann::ordered_json::array();
  doc_["runtime"] = nlohmann::ordered_json::object();
}

void RunManifest::add_input(const std::string& role, const std::filesystem::path& path) {
  bool dir = std::filesystem::is_directory(path);
  doc_["inputs"].push_back({{"role", role},
                            {"path", path.generic_string()},
                            {"kind", dir ? "directory" : "file"},
                            {"sha256", dir ? sha256_tree(path) : sha256_file(path)}});
}

void RunManifest::add_output(const std::string& role, const std::filesystem::path& path) {
  bool dir = std::filesystem::is_directory(path);
  doc_["outputs"].push_back({{"role", role},
                             {"name", path.filename().generic_string()},
                             {"kind", dir ? "directory" : "file"},
                             {"sha256", dir ? sha256_tree(path) : sha256_file(path)}});
}

void RunManifest::time_stage(const std::string& stage, std::chrono::steady_clock::duration elapsed) {
  doc_["runtime"]["timing_seconds"][stage] = std::chrono::duration<double>(elapsed).count();
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << doc_.dump(2) << '\n';
}

std::filesystem::path manifest_path_for(const std::filesystem::path& out) {
  std::string base = out.string();
  while (base.size() > 1 && base.back() == '/') base.pop_back();
  return std::filesystem::path(base + ".manifest.json");
}

}  // namespace plansteps
