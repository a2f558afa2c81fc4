#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "plansteps/pddl.hpp"
#include "plansteps/rng.hpp"

namespace plansteps::forge::detail {

// Knob values drawn for one attempt. Generators may add derived entries (for
// instance the number of reverse steps actually taken).
using Knobs = std::map<std::string, int>;

// Builds one candidate problem, or nullopt when the draw is degenerate. The
// result is not yet checked for solvability or plan length.
using Generator = std::optional<pddl::ProblemDef> (*)(Rng& rng, Knobs& knobs);

Generator generator_for(std::string_view domain_id);

}  // namespace plansteps::forge::detail
