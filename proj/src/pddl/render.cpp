#include <fmt/format.h>

#include "plansteps/pddl.hpp"

namespace plansteps::pddl {

namespace {

std::string render_atom(const Atom& atom) {
  std::string out = "(" + atom.predicate;
  for (const auto& a : atom.args) out += " " + a;
  return out + ")";
}

std::string render_literal(const Literal& lit) {
  return lit.negated ? "(not " + render_atom(lit.atom) + ")" : render_atom(lit.atom);
}

// Groups consecutive names sharing a type: "a b - block c - peg".
std::string render_typed(const std::vector<TypedName>& names, bool typed) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ' ';
    out += names[i].name;
    bool last_of_group = i + 1 == names.size() || names[i + 1].type != names[i].type;
    if (typed && last_of_group) out += " - " + names[i].type;
  }
  return out;
}

template <typename T, typename F>
std::string conjunction(const std::vector<T>& items, F render) {
  if (items.empty()) return "(and)";
  if (items.size() == 1) return render(items.front());
  std::string out = "(and";
  for (const auto& item : items) out += " " + render(item);
  return out + ")";
}

}  // namespace

std::string render_domain(const DomainDef& domain) {
  bool typed = domain.has_requirement(Requirement::Typing);
  std::string out = fmt::format("(define (domain {})\n", domain.name);
  if (!domain.requirements.empty()) {
    out += "  (:requirements";
    for (Requirement r : domain.requirements) out += fmt::format(" {}", to_string(r));
    out += ")\n";
  }
  if (typed && !domain.types.empty()) {
    std::vector<TypedName> types;
    for (const auto& t : domain.types) types.push_back({t.name, t.parent});
    out += fmt::format("  (:types {})\n", render_typed(types, true));
  }
  out += "  (:predicates";
  for (const auto& p : domain.predicates) {
    out += "\n    (" + p.name;
    if (!p.parameters.empty()) out += " " + render_typed(p.parameters, typed);
    out += ")";
  }
  out += ")\n";
  for (const auto& a : domain.action_schemas) {
    out += fmt::format("  (:action {}\n", a.name);
    out += fmt::format("    :parameters ({})\n", render_typed(a.parameters, typed));
    out += fmt::format("    :precondition {}\n", conjunction(a.precondition, render_literal));
    std::vector<Literal> effects;
    for (const auto& e : a.add_effects) effects.push_back({e, false});
    for (const auto& e : a.delete_effects) effects.push_back({e, true});
    out += fmt::format("    :effect {})\n", conjunction(effects, render_literal));
  }
  out += ")\n";
  return out;
}

std::string render_problem(const ProblemDef& problem) {
  bool typed = std::any_of(problem.objects.begin(), problem.objects.end(),
                           [](const TypedName& o) { return o.type != kObjectType; });
  std::string out = fmt::format("(define (problem {})\n", problem.name);
  out += fmt::format("  (:domain {})\n", problem.domain_name);
  out += fmt::format("  (:objects {})\n", render_typed(problem.objects, typed));
  out += "  (:init";
  for (const auto& a : problem.init) out += "\n    " + render_atom(a);
  out += ")\n";
  out += fmt::format("  (:goal {}))\n", conjunction(problem.goal, render_atom));
  return out;
}

}  // namespace plansteps::pddl
