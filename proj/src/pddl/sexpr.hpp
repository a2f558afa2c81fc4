#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace plansteps::pddl::detail {

struct SExpr {
  bool is_list = false;
  std::string atom;  // lower-cased symbol when !is_list
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_symbol(std::string_view s) const { return !is_list && atom == s; }
};

// Reads exactly one top-level list. Throws ParseError(Syntax) with the
// position of the offending character.
SExpr read_document(std::string_view text);

}  // namespace plansteps::pddl::detail
