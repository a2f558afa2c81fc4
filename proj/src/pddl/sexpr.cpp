#include "sexpr.hpp"

#include <cctype>

#include <fmt/format.h>

#include "plansteps/pddl.hpp"

namespace plansteps::pddl::detail {
namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr document() {
    skip_blank();
    if (at_end()) throw error("empty document");
    if (peek() != '(') throw error(fmt::format("expected '(' but found '{}'", peek()));
    SExpr root = list();
    skip_blank();
    if (!at_end()) {
      if (peek() == ')') throw error("unbalanced parenthesis: unexpected ')'");
      throw error("unexpected content after the closing parenthesis");
    }
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  ParseError error(const std::string& what) const {
    return ParseError(ErrorKind::Syntax,
                      fmt::format("syntax error at line {} column {}: {}", line_, column_, what),
                      line_, column_);
  }

  SExpr list() {
    SExpr node;
    node.is_list = true;
    node.line = line_;
    node.column = column_;
    advance();  // '('
    for (;;) {
      skip_blank();
      if (at_end()) {
        throw ParseError(ErrorKind::Syntax,
                         fmt::format("syntax error at line {} column {}: unbalanced parenthesis, "
                                     "'(' is never closed",
                                     node.line, node.column),
                         node.line, node.column);
      }
      char c = peek();
      if (c == ')') {
        advance();
        return node;
      }
      if (c == '(') {
        node.items.push_back(list());
      } else {
        node.items.push_back(symbol());
      }
    }
  }

  SExpr symbol() {
    SExpr node;
    node.line = line_;
    node.column = column_;
    while (!at_end()) {
      char c = peek();
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      node.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

SExpr read_document(std::string_view text) { return Reader(text).document(); }

}  // namespace plansteps::pddl::detail
