#pragma once

// Abstract syntax for the STRIPS + typing fragment of PDDL, with a parser and
// a canonical renderer. Identifiers are lower-cased on input.

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plansteps::pddl {

enum class Requirement { Strips, Typing, NegativePreconditions, Equality };

std::string_view to_string(Requirement r);

inline constexpr std::string_view kObjectType = "object";
inline constexpr std::string_view kEqualityPredicate = "=";

struct TypedName {
  std::string name;
  std::string type;
  bool operator==(const TypedName&) const = default;
};

struct TypeDecl {
  std::string name;
  std::string parent;
  bool operator==(const TypeDecl&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> parameters;
  bool operator==(const PredicateDecl&) const = default;
};

// An atom over variables ("?x") or object names. Ordering is lexicographic on
// predicate name, then arguments.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;
  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

std::string to_string(const Atom& atom);  // "on(a,b)"

struct Literal {
  Atom atom;
  bool negated = false;
  bool operator==(const Literal&) const = default;
  bool is_equality() const { return atom.predicate == kEqualityPredicate; }
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> parameters;
  std::vector<Literal> precondition;
  std::vector<Atom> add_effects;
  std::vector<Atom> delete_effects;
  bool operator==(const ActionSchema&) const = default;
};

struct DomainDef {
  std::string name;
  std::vector<Requirement> requirements;  // sorted, unique
  std::vector<TypeDecl> types;            // declaration order; "object" implicit
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> action_schemas;

  bool operator==(const DomainDef&) const = default;

  bool has_requirement(Requirement r) const;
  bool has_type(std::string_view type) const;
  // True if `type` equals `ancestor` or inherits from it.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;
  const PredicateDecl* find_predicate(std::string_view name) const;
  const ActionSchema* find_schema(std::string_view name) const;
  // Index in declaration order, or -1.
  int predicate_index(std::string_view name) const;
};

struct ProblemDef {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;  // sorted, unique
  std::vector<Atom> goal;  // conjunction, declaration order, unique
  bool operator==(const ProblemDef&) const = default;

  const TypedName* find_object(std::string_view name) const;
};

enum class ErrorKind {
  Syntax,
  UnsupportedRequirement,
  MissingRequirement,
  UnsupportedFeature,
  ArityMismatch,
  TypeMismatch,
  UnknownType,
  CyclicTypes,
  UnknownPredicate,
  UnknownObject,
  UnknownVariable,
  DuplicateName,
  DomainMismatch,
};

std::string_view to_string(ErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ErrorKind kind, const std::string& message, int line = 0, int column = 0);

  ErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ErrorKind kind_;
  int line_;
  int column_;
};

DomainDef parse_domain(std::string_view text);
ProblemDef parse_problem(std::string_view text, const DomainDef& domain);

std::string render_domain(const DomainDef& domain);
std::string render_problem(const ProblemDef& problem);

}  // namespace plansteps::pddl
