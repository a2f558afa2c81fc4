#include "plansteps/forge.hpp"

#include <charconv>
#include <mutex>

#include <fmt/format.h>

#include "generators.hpp"
#include "plansteps/embedded.hpp"
#include "plansteps/grounder.hpp"
#include "plansteps/rng.hpp"

namespace plansteps::forge {

std::optional<IntRange> parse_range(std::string_view text) {
  auto parse_int = [](std::string_view s) -> std::optional<int> {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    auto v = parse_int(text);
    if (!v) return std::nullopt;
    return IntRange{*v, *v};
  }
  auto lo = parse_int(text.substr(0, dots));
  auto hi = parse_int(text.substr(dots + 2));
  if (!lo || !hi || *lo > *hi) return std::nullopt;
  return IntRange{*lo, *hi};
}

std::string to_string(const IntRange& r) {
  return r.lo == r.hi ? fmt::format("{}", r.lo) : fmt::format("{}..{}", r.lo, r.hi);
}

namespace {

std::string_view embedded_domain(std::string_view id) {
  std::string path = fmt::format("domains/{}.pddl", id);
  for (const auto& f : embedded::files())
    if (f.path == path) return f.content;
  throw std::logic_error("missing embedded domain file " + path);
}

std::vector<DomainCatalogEntry> build_catalog() {
  auto entry = [](std::string id, std::string display, SizeParams params) {
    DomainCatalogEntry e;
    e.pddl_text = embedded_domain(id);
    e.domain_id = std::move(id);
    e.display_name = std::move(display);
    e.size_params = std::move(params);
    return e;
  };
  return {
      entry("blocksworld3", "BlocksWorld-3", {{"blocks", {3, 6}}}),
      entry("blocksworld4", "BlocksWorld-4", {{"blocks", {3, 5}}}),
      entry("ferry", "Ferry", {{"locations", {2, 4}}, {"cars", {1, 3}}}),
      entry("hanoi", "Hanoi", {{"disks", {2, 4}}, {"transfer", {0, 1}}}),
      entry("logistics", "Logistics", {{"cities", {2, 3}}, {"city-size", {1, 2}}, {"packages", {1, 3}}}),
      entry("elevator", "Elevator", {{"floors", {3, 6}}, {"passengers", {1, 3}}}),
      entry("npuzzle", "N-Puzzle", {{"width", {2, 3}}, {"height", {2, 3}}, {"scramble", {4, 30}}}),
      entry("rooms", "Rooms", {{"rooms", {3, 7}}, {"extra-doors", {0, 3}}, {"lit", {1, 3}}}),
      entry("sokoban", "Sokoban",
            {{"width", {3, 5}}, {"height", {3, 4}}, {"walls", {0, 2}}, {"boxes", {1, 2}}, {"steps", {4, 24}}}),
      entry("spanner", "Spanner",
            {{"locations", {3, 6}}, {"nuts", {1, 3}}, {"spanners", {1, 4}}, {"backlink-pct", {0, 100}}}),
      entry("visitgrid", "VisitGrid", {{"width", {2, 4}}, {"height", {1, 3}}, {"targets", {1, 4}}}),
  };
}

}  // namespace

const std::vector<DomainCatalogEntry>& catalog() {
  static const std::vector<DomainCatalogEntry> kCatalog = build_catalog();
  return kCatalog;
}

const DomainCatalogEntry* find_entry(std::string_view domain_id) {
  for (const auto& e : catalog())
    if (e.domain_id == domain_id) return &e;
  return nullptr;
}

const pddl::DomainDef& domain_def(std::string_view domain_id) {
  static const std::map<std::string, pddl::DomainDef, std::less<>> kDomains = [] {
    std::map<std::string, pddl::DomainDef, std::less<>> out;
    for (const auto& e : catalog()) out.emplace(e.domain_id, pddl::parse_domain(e.pddl_text));
    return out;
  }();
  auto it = kDomains.find(domain_id);
  if (it == kDomains.end())
    throw std::invalid_argument(fmt::format("unknown domain '{}'", domain_id));
  return it->second;
}

std::string GeneratedInstance::text() const {
  std::vector<std::string> knobs;
  for (const auto& [k, v] : sampled_params) knobs.push_back(fmt::format("{}={}", k, v));
  return fmt::format("; domain={} seed={} optimal-cost={} params={}\n{}", domain_id, seed,
                     optimal_cost, fmt::join(knobs, ","), pddl::render_problem(problem));
}

std::uint64_t instance_seed(std::uint64_t master, std::string_view domain_id, std::size_t index) {
  return derive_seed(derive_seed(master, domain_id), static_cast<std::uint64_t>(index));
}

GeneratedInstance generate_instance(std::string_view domain_id, const SizeParams& size,
                                    std::uint64_t seed, const GenerateOptions& options) {
  const DomainCatalogEntry* entry = find_entry(domain_id);
  if (!entry) throw std::invalid_argument(fmt::format("unknown domain '{}'", domain_id));
  SizeParams ranges = entry->size_params;
  for (const auto& [knob, range] : size) {
    auto it = ranges.find(knob);
    if (it == ranges.end())
      throw std::invalid_argument(fmt::format("domain '{}' has no size parameter '{}'", domain_id, knob));
    if (!it->second.contains(range))
      throw std::invalid_argument(fmt::format("{}={} is outside the permitted range {}", knob,
                                              to_string(range), to_string(it->second)));
    it->second = range;
  }
  const IntRange bounds = options.mopl_bounds.value_or(entry->mopl_bounds);
  const pddl::DomainDef& domain = domain_def(domain_id);
  detail::Generator generate = detail::generator_for(domain_id);

  Rng rng(derive_seed(seed, domain_id));
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    detail::Knobs knobs;
    for (const auto& [knob, range] : ranges) knobs[knob] = rng.uniform_int(range.lo, range.hi);
    auto drafted = generate(rng, knobs);
    if (!drafted) continue;
    drafted->name = fmt::format("{}-{:016x}", domain_id, seed);
    // Canonical form: exactly what a reader of the emitted file will see.
    pddl::ProblemDef problem = pddl::parse_problem(pddl::render_problem(*drafted), domain);
    GroundTask task = ground(domain, problem);
    if (task.goal_unreachable) continue;
    SearchResult result = solve_optimal(task, task.init, HeuristicKind::LmCut, options.limits);
    if (result.outcome != SearchOutcome::Solved || !bounds.contains(result.plan->cost)) continue;
    GeneratedInstance out;
    out.domain_id = std::string(domain_id);
    out.problem = std::move(problem);
    out.seed = seed;
    out.optimal_cost = result.plan->cost;
    out.sampled_params = std::move(knobs);
    return out;
  }
  std::vector<std::string> described;
  for (const auto& [knob, range] : ranges) described.push_back(fmt::format("{}={}", knob, to_string(range)));
  throw GenerationError(fmt::format(
      "{}: no solvable instance with optimal cost in [{}, {}] after {} attempts ({})", domain_id,
      bounds.lo, bounds.hi, options.max_attempts, fmt::join(described, ", ")));
}

bool npuzzle_solvable(const std::vector<int>& board, int width) {
  const int cells = static_cast<int>(board.size());
  int inversions = 0, blank_row_from_bottom = 0;
  for (int i = 0; i < cells; ++i) {
    if (board[i] == 0) {
      blank_row_from_bottom = (cells / width) - i / width;
      continue;
    }
    for (int j = i + 1; j < cells; ++j)
      if (board[j] != 0 && board[j] < board[i]) ++inversions;
  }
  // Horizontal blank moves keep the inversion count; vertical ones change it
  // by width-1, so for even widths the blank row enters the invariant.
  if (width % 2 == 1) return inversions % 2 == 0;
  return (inversions + blank_row_from_bottom) % 2 == 1;
}

}  // namespace plansteps::forge
