#pragma once

// Built-in domain catalog and seeded generators for solvable problem
// instances of bounded optimal plan length.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plansteps/pddl.hpp"
#include "plansteps/search.hpp"

namespace plansteps::forge {

struct IntRange {
  int lo = 0;
  int hi = 0;
  bool contains(int v) const { return lo <= v && v <= hi; }
  bool contains(const IntRange& r) const { return lo <= r.lo && r.hi <= hi; }
  bool operator==(const IntRange&) const = default;
};

// "3..5" or "4".
std::optional<IntRange> parse_range(std::string_view text);
std::string to_string(const IntRange& r);

using SizeParams = std::map<std::string, IntRange>;

struct DomainCatalogEntry {
  std::string domain_id;
  std::string display_name;
  std::string_view pddl_text;
  SizeParams size_params;  // permitted range per knob; generation samples within it
  IntRange mopl_bounds{2, 15};
};

// All built-in domains in a fixed order.
const std::vector<DomainCatalogEntry>& catalog();
const DomainCatalogEntry* find_entry(std::string_view domain_id);
// Parsed domain, cached; throws std::invalid_argument for unknown ids.
const pddl::DomainDef& domain_def(std::string_view domain_id);

inline constexpr std::string_view kHoldoutDomain = "rooms";

struct GeneratedInstance {
  std::string domain_id;
  pddl::ProblemDef problem;
  std::uint64_t seed = 0;
  int optimal_cost = 0;
  std::map<std::string, int> sampled_params;

  // Problem file contents, headed by a comment recording the provenance.
  std::string text() const;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerateOptions {
  std::optional<IntRange> mopl_bounds;  // defaults to the catalog bounds
  int max_attempts = 400;
  SearchLimits limits{200'000, std::chrono::milliseconds(20'000)};
};

// Draws a solvable instance whose optimal cost lies within the bounds.
// `size` narrows catalog ranges (unlisted knobs keep the catalog range).
// Throws std::invalid_argument for unknown domains/knobs or ranges outside the
// catalog, and GenerationError when no instance passes within the budget.
GeneratedInstance generate_instance(std::string_view domain_id, const SizeParams& size,
                                    std::uint64_t seed, const GenerateOptions& options = {});

// Seed of the index-th instance in a batch drawn with a master seed.
std::uint64_t instance_seed(std::uint64_t master, std::string_view domain_id, std::size_t index);

// Sliding-puzzle solvability from a row-major board (0 = blank) relative to
// the goal with tiles 1..n-1 in order and the blank last.
bool npuzzle_solvable(const std::vector<int>& board, int width);

}  // namespace plansteps::forge
