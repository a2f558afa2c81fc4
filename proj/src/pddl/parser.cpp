#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "plansteps/pddl.hpp"
#include "sexpr.hpp"

namespace plansteps::pddl {

using detail::SExpr;

std::string_view to_string(Requirement r) {
  switch (r) {
    case Requirement::Strips: return ":strips";
    case Requirement::Typing: return ":typing";
    case Requirement::NegativePreconditions: return ":negative-preconditions";
    case Requirement::Equality: return ":equality";
  }
  return "?";
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnsupportedRequirement: return "unsupported requirement";
    case ErrorKind::MissingRequirement: return "missing requirement";
    case ErrorKind::UnsupportedFeature: return "unsupported feature";
    case ErrorKind::ArityMismatch: return "arity mismatch";
    case ErrorKind::TypeMismatch: return "type mismatch";
    case ErrorKind::UnknownType: return "unknown type";
    case ErrorKind::CyclicTypes: return "cyclic type hierarchy";
    case ErrorKind::UnknownPredicate: return "unknown predicate";
    case ErrorKind::UnknownObject: return "unknown object";
    case ErrorKind::UnknownVariable: return "unknown variable";
    case ErrorKind::DuplicateName: return "duplicate name";
    case ErrorKind::DomainMismatch: return "domain mismatch";
  }
  return "error";
}

std::string to_string(const Atom& atom) {
  return fmt::format("{}({})", atom.predicate, fmt::join(atom.args, ","));
}

ParseError::ParseError(ErrorKind kind, const std::string& message, int line, int column)
    : std::runtime_error(message), kind_(kind), line_(line), column_(column) {}

bool DomainDef::has_requirement(Requirement r) const {
  return std::find(requirements.begin(), requirements.end(), r) != requirements.end();
}

bool DomainDef::has_type(std::string_view type) const {
  if (type == kObjectType) return true;
  return std::any_of(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == type; });
}

bool DomainDef::is_subtype(std::string_view type, std::string_view ancestor) const {
  if (ancestor == kObjectType) return true;
  std::string current(type);
  // Bounded walk; the hierarchy is validated acyclic at parse time.
  for (std::size_t steps = 0; steps <= types.size(); ++steps) {
    if (current == ancestor) return true;
    auto it = std::find_if(types.begin(), types.end(),
                           [&](const TypeDecl& t) { return t.name == current; });
    if (it == types.end()) return false;
    current = it->parent;
  }
  return false;
}

const PredicateDecl* DomainDef::find_predicate(std::string_view name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

const ActionSchema* DomainDef::find_schema(std::string_view name) const {
  for (const auto& a : action_schemas)
    if (a.name == name) return &a;
  return nullptr;
}

int DomainDef::predicate_index(std::string_view name) const {
  for (std::size_t i = 0; i < predicates.size(); ++i)
    if (predicates[i].name == name) return static_cast<int>(i);
  return -1;
}

const TypedName* ProblemDef::find_object(std::string_view name) const {
  for (const auto& o : objects)
    if (o.name == name) return &o;
  return nullptr;
}

namespace {

[[noreturn]] void fail(ErrorKind kind, const SExpr& at, const std::string& message) {
  throw ParseError(kind,
                   fmt::format("{} at line {} column {}: {}", to_string(kind), at.line, at.column,
                               message),
                   at.line, at.column);
}

bool is_variable(std::string_view s) { return !s.empty() && s.front() == '?'; }

const std::string& symbol_of(const SExpr& e, std::string_view what) {
  if (e.is_list) fail(ErrorKind::Syntax, e, fmt::format("expected {} but found a list", what));
  return e.atom;
}

const std::string& head_of(const SExpr& e) {
  if (!e.is_list || e.items.empty() || e.items.front().is_list)
    fail(ErrorKind::Syntax, e, "expected a list starting with a keyword");
  return e.items.front().atom;
}

// Features that are recognised but deliberately unsupported, keyed by the
// symbol that introduces them.
std::optional<std::string_view> unsupported_formula(std::string_view head) {
  static const std::map<std::string_view, std::string_view> kFeatures = {
      {"or", "disjunctive conditions"},
      {"imply", "implications"},
      {"exists", "quantified conditions"},
      {"forall", "quantified conditions"},
      {"when", "conditional effects"},
      {"increase", "numeric fluents"},
      {"decrease", "numeric fluents"},
      {"assign", "numeric fluents"},
      {"scale-up", "numeric fluents"},
      {"scale-down", "numeric fluents"},
      {"<", "numeric fluents"},
      {">", "numeric fluents"},
      {"<=", "numeric fluents"},
      {">=", "numeric fluents"},
      {"preference", "preferences"},
      {"at", "timed literals"},
  };
  auto it = kFeatures.find(head);
  if (it == kFeatures.end()) return std::nullopt;
  return it->second;
}

struct TypedList {
  std::vector<TypedName> names;
  std::vector<const SExpr*> positions;
  std::vector<const SExpr*> type_positions;
  bool used_typing = false;
};

TypedList parse_typed_list(const std::vector<SExpr>& items, std::size_t begin) {
  TypedList out;
  std::vector<std::size_t> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& item = items[i];
    if (item.is_symbol("-")) {
      if (i + 1 >= items.size()) fail(ErrorKind::Syntax, item, "'-' must be followed by a type");
      const SExpr& type = items[i + 1];
      if (type.is_list) {
        if (!type.items.empty() && type.items.front().is_symbol("either"))
          fail(ErrorKind::UnsupportedFeature, type, "either-types are not supported");
        fail(ErrorKind::Syntax, type, "expected a type name");
      }
      if (pending.empty()) fail(ErrorKind::Syntax, item, "'-' without preceding names");
      for (std::size_t idx : pending) {
        out.names[idx].type = type.atom;
        out.type_positions[idx] = &type;
      }
      pending.clear();
      out.used_typing = true;
      ++i;
      continue;
    }
    out.names.push_back({symbol_of(item, "a name"), std::string(kObjectType)});
    out.positions.push_back(&item);
    out.type_positions.push_back(&item);
    pending.push_back(out.names.size() - 1);
  }
  return out;
}

template <typename T>
void dedupe_in_order(std::vector<T>& items) {
  std::vector<T> out;
  for (auto& item : items)
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(std::move(item));
  items = std::move(out);
}

std::vector<Requirement> parse_requirements(const SExpr& section) {
  static const std::map<std::string_view, Requirement> kSupported = {
      {":strips", Requirement::Strips},
      {":typing", Requirement::Typing},
      {":negative-preconditions", Requirement::NegativePreconditions},
      {":equality", Requirement::Equality},
  };
  std::set<Requirement> found;
  for (std::size_t i = 1; i < section.items.size(); ++i) {
    const std::string& flag = symbol_of(section.items[i], "a requirement flag");
    auto it = kSupported.find(flag);
    if (it == kSupported.end())
      fail(ErrorKind::UnsupportedRequirement, section.items[i],
           fmt::format("requirement '{}' is not supported", flag));
    found.insert(it->second);
  }
  return {found.begin(), found.end()};
}

void check_define(const SExpr& root, std::string_view kind) {
  if (!root.is_list || root.items.size() < 2 || !root.items[0].is_symbol("define"))
    fail(ErrorKind::Syntax, root, "expected (define ...)");
  const SExpr& header = root.items[1];
  if (!header.is_list || header.items.size() != 2 || !header.items[0].is_symbol(kind) ||
      header.items[1].is_list)
    fail(ErrorKind::Syntax, header, fmt::format("expected ({} <name>)", kind));
}

class DomainParser {
 public:
  DomainDef parse(const SExpr& root) {
    check_define(root, "domain");
    domain_.name = root.items[1].items[1].atom;

    const SExpr* requirements = nullptr;
    const SExpr* types = nullptr;
    const SExpr* predicates = nullptr;
    std::vector<const SExpr*> actions;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& section = root.items[i];
      const std::string& key = head_of(section);
      auto take = [&](const SExpr*& slot) {
        if (slot) fail(ErrorKind::Syntax, section, fmt::format("duplicate section {}", key));
        slot = &section;
      };
      if (key == ":requirements") take(requirements);
      else if (key == ":types") take(types);
      else if (key == ":predicates") take(predicates);
      else if (key == ":action") actions.push_back(&section);
      else if (key == ":constants")
        fail(ErrorKind::UnsupportedFeature, section, "domain constants are not supported");
      else if (key == ":functions")
        fail(ErrorKind::UnsupportedFeature, section, "numeric fluents are not supported");
      else if (key == ":durative-action")
        fail(ErrorKind::UnsupportedFeature, section, "durative actions are not supported");
      else if (key == ":derived")
        fail(ErrorKind::UnsupportedFeature, section, "derived predicates are not supported");
      else if (key == ":constraints")
        fail(ErrorKind::UnsupportedFeature, section, "constraints are not supported");
      else
        fail(ErrorKind::Syntax, section, fmt::format("unknown domain section '{}'", key));
    }

    if (requirements) domain_.requirements = parse_requirements(*requirements);
    if (types) parse_types(*types);
    if (predicates) parse_predicates(*predicates);
    for (const SExpr* action : actions) parse_action(*action);
    return std::move(domain_);
  }

 private:
  void require(Requirement r, const SExpr& at, std::string_view what) {
    if (!domain_.has_requirement(r))
      fail(ErrorKind::MissingRequirement, at,
           fmt::format("{} requires the {} requirement", what, to_string(r)));
  }

  void check_type(const std::string& type, const SExpr& at) {
    if (!domain_.has_type(type)) fail(ErrorKind::UnknownType, at, fmt::format("type '{}'", type));
  }

  void parse_types(const SExpr& section) {
    require(Requirement::Typing, section, "a type hierarchy");
    TypedList list = parse_typed_list(section.items, 1);
    for (std::size_t i = 0; i < list.names.size(); ++i) {
      const TypedName& t = list.names[i];
      if (t.name == kObjectType) continue;
      if (domain_.has_type(t.name))
        fail(ErrorKind::DuplicateName, *list.positions[i], fmt::format("type '{}'", t.name));
      domain_.types.push_back({t.name, t.type});
    }
    for (std::size_t i = 0, j = 0; i < list.names.size(); ++i) {
      if (list.names[i].name == kObjectType) continue;
      check_type(domain_.types[j].parent, *list.type_positions[i]);
      ++j;
    }
    for (const TypeDecl& t : domain_.types) {
      std::string current = t.parent;
      for (std::size_t steps = 0; current != kObjectType; ++steps) {
        if (current == t.name || steps > domain_.types.size())
          fail(ErrorKind::CyclicTypes, section, fmt::format("type '{}' is its own ancestor", t.name));
        auto it = std::find_if(domain_.types.begin(), domain_.types.end(),
                               [&](const TypeDecl& d) { return d.name == current; });
        current = it->parent;
      }
    }
  }

  std::vector<TypedName> parse_parameters(const SExpr& list, bool predicate) {
    if (!list.is_list) fail(ErrorKind::Syntax, list, "expected a parameter list");
    TypedList typed = parse_typed_list(list.items, predicate ? 1 : 0);
    if (typed.used_typing) require(Requirement::Typing, list, "typed parameters");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < typed.names.size(); ++i) {
      const TypedName& p = typed.names[i];
      if (!is_variable(p.name))
        fail(ErrorKind::Syntax, *typed.positions[i],
             fmt::format("parameter '{}' must start with '?'", p.name));
      if (!seen.insert(p.name).second)
        fail(ErrorKind::DuplicateName, *typed.positions[i], fmt::format("parameter '{}'", p.name));
      check_type(p.type, *typed.type_positions[i]);
    }
    return typed.names;
  }

  void parse_predicates(const SExpr& section) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const SExpr& decl = section.items[i];
      const std::string& name = head_of(decl);
      if (name == kEqualityPredicate)
        fail(ErrorKind::Syntax, decl, "'=' is reserved for equality");
      if (domain_.find_predicate(name))
        fail(ErrorKind::DuplicateName, decl, fmt::format("predicate '{}'", name));
      domain_.predicates.push_back({name, parse_parameters(decl, true)});
    }
  }

  Atom parse_atom(const SExpr& e, const std::vector<TypedName>& params) {
    const std::string& name = head_of(e);
    const PredicateDecl* decl = domain_.find_predicate(name);
    if (!decl) fail(ErrorKind::UnknownPredicate, e, fmt::format("predicate '{}'", name));
    if (e.items.size() - 1 != decl->parameters.size())
      fail(ErrorKind::ArityMismatch, e,
           fmt::format("predicate '{}' expects {} arguments but got {}", name,
                       decl->parameters.size(), e.items.size() - 1));
    Atom atom{name, {}};
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const std::string& arg = symbol_of(e.items[i], "an argument");
      auto param = std::find_if(params.begin(), params.end(),
                                [&](const TypedName& p) { return p.name == arg; });
      if (param == params.end())
        fail(ErrorKind::UnknownVariable, e.items[i],
             fmt::format("'{}' is not a parameter of the action", arg));
      const std::string& expected = decl->parameters[i - 1].type;
      if (!domain_.is_subtype(param->type, expected) && !domain_.is_subtype(expected, param->type))
        fail(ErrorKind::TypeMismatch, e.items[i],
             fmt::format("'{}' has type '{}' but '{}' expects '{}'", arg, param->type, name,
                         expected));
      atom.args.push_back(arg);
    }
    return atom;
  }

  Atom parse_equality(const SExpr& e, const std::vector<TypedName>& params) {
    require(Requirement::Equality, e, "an equality atom");
    if (e.items.size() != 3) fail(ErrorKind::ArityMismatch, e, "'=' expects 2 arguments");
    Atom atom{std::string(kEqualityPredicate), {}};
    for (std::size_t i = 1; i < 3; ++i) {
      const std::string& arg = symbol_of(e.items[i], "an argument");
      if (std::none_of(params.begin(), params.end(),
                       [&](const TypedName& p) { return p.name == arg; }))
        fail(ErrorKind::UnknownVariable, e.items[i],
             fmt::format("'{}' is not a parameter of the action", arg));
      atom.args.push_back(arg);
    }
    return atom;
  }

  void parse_condition(const SExpr& e, const std::vector<TypedName>& params,
                       std::vector<Literal>& out) {
    if (!e.is_list) fail(ErrorKind::Syntax, e, "expected a condition");
    if (e.items.empty()) return;
    const std::string& head = head_of(e);
    if (head == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) parse_condition(e.items[i], params, out);
      return;
    }
    if (head == "not") {
      if (e.items.size() != 2 || !e.items[1].is_list)
        fail(ErrorKind::Syntax, e, "'not' expects exactly one atom");
      const SExpr& inner = e.items[1];
      const std::string& inner_head = head_of(inner);
      if (auto feature = unsupported_formula(inner_head); feature || inner_head == "and" ||
                                                          inner_head == "not")
        fail(ErrorKind::UnsupportedFeature, inner,
             fmt::format("negation of compound formulas ({}) is not supported",
                         feature ? *feature : std::string_view("nested connectives")));
      if (inner_head == kEqualityPredicate) {
        out.push_back({parse_equality(inner, params), true});
        return;
      }
      require(Requirement::NegativePreconditions, e, "a negative precondition");
      out.push_back({parse_atom(inner, params), true});
      return;
    }
    if (auto feature = unsupported_formula(head); feature && head != "at")
      fail(ErrorKind::UnsupportedFeature, e, fmt::format("{} are not supported", *feature));
    if (head == kEqualityPredicate) {
      out.push_back({parse_equality(e, params), false});
      return;
    }
    out.push_back({parse_atom(e, params), false});
  }

  void parse_effect(const SExpr& e, const std::vector<TypedName>& params, ActionSchema& schema) {
    if (!e.is_list) fail(ErrorKind::Syntax, e, "expected an effect");
    if (e.items.empty()) return;
    const std::string& head = head_of(e);
    if (head == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) parse_effect(e.items[i], params, schema);
      return;
    }
    if (head == "forall")
      fail(ErrorKind::UnsupportedFeature, e, "quantified effects are not supported");
    if (auto feature = unsupported_formula(head); feature && head != "at")
      fail(ErrorKind::UnsupportedFeature, e, fmt::format("{} are not supported", *feature));
    if (head == kEqualityPredicate)
      fail(ErrorKind::UnsupportedFeature, e, "equality is only allowed in preconditions");
    if (head == "not") {
      if (e.items.size() != 2 || !e.items[1].is_list)
        fail(ErrorKind::Syntax, e, "'not' expects exactly one atom");
      const std::string& inner_head = head_of(e.items[1]);
      if (inner_head == kEqualityPredicate)
        fail(ErrorKind::UnsupportedFeature, e, "equality is only allowed in preconditions");
      if (unsupported_formula(inner_head) && inner_head != "at")
        fail(ErrorKind::UnsupportedFeature, e.items[1], "compound delete effects are not supported");
      schema.delete_effects.push_back(parse_atom(e.items[1], params));
      return;
    }
    schema.add_effects.push_back(parse_atom(e, params));
  }

  void parse_action(const SExpr& section) {
    if (section.items.size() < 2 || section.items[1].is_list)
      fail(ErrorKind::Syntax, section, "expected (:action <name> ...)");
    ActionSchema schema;
    schema.name = section.items[1].atom;
    if (domain_.find_schema(schema.name))
      fail(ErrorKind::DuplicateName, section, fmt::format("action '{}'", schema.name));

    const SExpr* parameters = nullptr;
    const SExpr* precondition = nullptr;
    const SExpr* effect = nullptr;
    for (std::size_t i = 2; i < section.items.size(); i += 2) {
      const std::string& key = symbol_of(section.items[i], "an action keyword");
      if (i + 1 >= section.items.size())
        fail(ErrorKind::Syntax, section.items[i], fmt::format("'{}' has no value", key));
      const SExpr* value = &section.items[i + 1];
      const SExpr** slot = nullptr;
      if (key == ":parameters") slot = &parameters;
      else if (key == ":precondition") slot = &precondition;
      else if (key == ":effect") slot = &effect;
      else fail(ErrorKind::Syntax, section.items[i], fmt::format("unknown action keyword '{}'", key));
      if (*slot) fail(ErrorKind::Syntax, section.items[i], fmt::format("duplicate '{}'", key));
      *slot = value;
    }

    if (parameters) schema.parameters = parse_parameters(*parameters, false);
    if (precondition) parse_condition(*precondition, schema.parameters, schema.precondition);
    if (effect) parse_effect(*effect, schema.parameters, schema);

    dedupe_in_order(schema.precondition);
    dedupe_in_order(schema.add_effects);
    dedupe_in_order(schema.delete_effects);
    std::erase_if(schema.delete_effects, [&](const Atom& a) {
      return std::find(schema.add_effects.begin(), schema.add_effects.end(), a) !=
             schema.add_effects.end();
    });
    domain_.action_schemas.push_back(std::move(schema));
  }

  DomainDef domain_;
};

class ProblemParser {
 public:
  explicit ProblemParser(const DomainDef& domain) : domain_(domain) {}

  ProblemDef parse(const SExpr& root) {
    check_define(root, "problem");
    problem_.name = root.items[1].items[1].atom;

    const SExpr* domain_ref = nullptr;
    const SExpr* objects = nullptr;
    const SExpr* init = nullptr;
    const SExpr* goal = nullptr;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& section = root.items[i];
      const std::string& key = head_of(section);
      auto take = [&](const SExpr*& slot) {
        if (slot) fail(ErrorKind::Syntax, section, fmt::format("duplicate section {}", key));
        slot = &section;
      };
      if (key == ":domain") take(domain_ref);
      else if (key == ":objects") take(objects);
      else if (key == ":init") take(init);
      else if (key == ":goal") take(goal);
      else if (key == ":requirements") parse_requirements(section);
      else if (key == ":metric")
        fail(ErrorKind::UnsupportedFeature, section, "plan metrics are not supported");
      else if (key == ":constraints")
        fail(ErrorKind::UnsupportedFeature, section, "constraints are not supported");
      else
        fail(ErrorKind::Syntax, section, fmt::format("unknown problem section '{}'", key));
    }
    if (!domain_ref) fail(ErrorKind::Syntax, root, "missing (:domain ...)");
    if (domain_ref->items.size() != 2 || domain_ref->items[1].is_list)
      fail(ErrorKind::Syntax, *domain_ref, "expected (:domain <name>)");
    problem_.domain_name = domain_ref->items[1].atom;
    if (problem_.domain_name != domain_.name)
      fail(ErrorKind::DomainMismatch, *domain_ref,
           fmt::format("problem is for domain '{}' but was parsed against '{}'",
                       problem_.domain_name, domain_.name));
    if (!goal) fail(ErrorKind::Syntax, root, "missing (:goal ...)");

    if (objects) parse_objects(*objects);
    if (init) {
      for (std::size_t i = 1; i < init->items.size(); ++i) parse_init(init->items[i]);
      std::sort(problem_.init.begin(), problem_.init.end());
      problem_.init.erase(std::unique(problem_.init.begin(), problem_.init.end()),
                          problem_.init.end());
    }
    if (goal->items.size() != 2) fail(ErrorKind::Syntax, *goal, "expected (:goal <condition>)");
    parse_goal(goal->items[1]);
    dedupe_in_order(problem_.goal);
    return std::move(problem_);
  }

 private:
  void parse_objects(const SExpr& section) {
    TypedList list = parse_typed_list(section.items, 1);
    if (list.used_typing && !domain_.has_requirement(Requirement::Typing))
      fail(ErrorKind::MissingRequirement, section, "typed objects require :typing");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < list.names.size(); ++i) {
      const TypedName& o = list.names[i];
      if (is_variable(o.name))
        fail(ErrorKind::Syntax, *list.positions[i], fmt::format("object '{}' looks like a variable", o.name));
      if (!seen.insert(o.name).second)
        fail(ErrorKind::DuplicateName, *list.positions[i], fmt::format("object '{}'", o.name));
      if (!domain_.has_type(o.type))
        fail(ErrorKind::UnknownType, *list.type_positions[i], fmt::format("type '{}'", o.type));
      problem_.objects.push_back(o);
    }
  }

  Atom parse_ground_atom(const SExpr& e) {
    const std::string& name = head_of(e);
    const PredicateDecl* decl = domain_.find_predicate(name);
    if (!decl) fail(ErrorKind::UnknownPredicate, e, fmt::format("predicate '{}'", name));
    if (e.items.size() - 1 != decl->parameters.size())
      fail(ErrorKind::ArityMismatch, e,
           fmt::format("predicate '{}' expects {} arguments but got {}", name,
                       decl->parameters.size(), e.items.size() - 1));
    Atom atom{name, {}};
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const std::string& arg = symbol_of(e.items[i], "an object name");
      const TypedName* object = problem_.find_object(arg);
      if (!object) fail(ErrorKind::UnknownObject, e.items[i], fmt::format("object '{}'", arg));
      const std::string& expected = decl->parameters[i - 1].type;
      if (!domain_.is_subtype(object->type, expected))
        fail(ErrorKind::TypeMismatch, e.items[i],
             fmt::format("object '{}' of type '{}' cannot fill a '{}' argument of '{}'", arg,
                         object->type, expected, name));
      atom.args.push_back(arg);
    }
    return atom;
  }

  void parse_init(const SExpr& e) {
    const std::string& head = head_of(e);
    if (head == kEqualityPredicate)
      fail(ErrorKind::UnsupportedFeature, e, "numeric fluents are not supported");
    if (head == "not")
      fail(ErrorKind::UnsupportedFeature, e, "negative initial facts are not supported");
    if (head == "at" && !domain_.find_predicate("at"))
      fail(ErrorKind::UnsupportedFeature, e, "timed initial literals are not supported");
    problem_.init.push_back(parse_ground_atom(e));
  }

  void parse_goal(const SExpr& e) {
    if (!e.is_list) fail(ErrorKind::Syntax, e, "expected a goal condition");
    if (e.items.empty()) return;
    const std::string& head = head_of(e);
    if (head == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) parse_goal(e.items[i]);
      return;
    }
    if (head == "not") fail(ErrorKind::UnsupportedFeature, e, "negative goals are not supported");
    if (head == "forall" || head == "exists")
      fail(ErrorKind::UnsupportedFeature, e, "quantified goals are not supported");
    if (head == "or" || head == "imply")
      fail(ErrorKind::UnsupportedFeature, e, "disjunctive goals are not supported");
    if (head == kEqualityPredicate)
      fail(ErrorKind::UnsupportedFeature, e, "equality goals are not supported");
    if (head == "at" && !domain_.find_predicate("at"))
      fail(ErrorKind::UnsupportedFeature, e, "timed goals are not supported");
    if (auto feature = unsupported_formula(head); feature && head != "at")
      fail(ErrorKind::UnsupportedFeature, e, fmt::format("{} are not supported", *feature));
    problem_.goal.push_back(parse_ground_atom(e));
  }

  const DomainDef& domain_;
  ProblemDef problem_;
};

}  // namespace

DomainDef parse_domain(std::string_view text) {
  return DomainParser().parse(detail::read_document(text));
}

ProblemDef parse_problem(std::string_view text, const DomainDef& domain) {
  return ProblemParser(domain).parse(detail::read_document(text));
}

}  // namespace plansteps::pddl
