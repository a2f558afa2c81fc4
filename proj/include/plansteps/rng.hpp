#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace plansteps {

// Seeded random stream with platform-independent draws. std::mt19937_64 output
// is fixed by the standard; the std distributions are not, so bounded and real
// draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Uniform in [lo, hi] (inclusive).
  int uniform_int(int lo, int hi);

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_string(std::string_view text);

// Deterministic child seed derived from a parent seed and a label.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

}  // namespace plansteps
