#include "plansteps/verbalizer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "plansteps/embedded.hpp"
#include "plansteps/forge.hpp"

namespace plansteps::verbal {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Replaces {argN} (1-based) and {subjects}; unknown placeholders are errors.
std::string fill_template(std::string_view text, const std::vector<std::string>& args,
                 const std::string* subjects = nullptr) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] != '{') {
      out += text[i++];
      continue;
    }
    auto close = text.find('}', i);
    if (close == std::string_view::npos) throw TemplateError(fmt::format("unclosed '{{' in \"{}\"", text));
    std::string_view key = text.substr(i + 1, close - i - 1);
    if (key == "subjects" && subjects) {
      out += *subjects;
    } else if (key.substr(0, 3) == "arg" && key.size() > 3 &&
               std::all_of(key.begin() + 3, key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      std::size_t n = std::stoul(std::string(key.substr(3)));
      if (n == 0 || n > args.size())
        throw TemplateError(fmt::format("placeholder {{{}}} out of range in \"{}\"", key, text));
      out += args[n - 1];
    } else {
      throw TemplateError(fmt::format("unknown placeholder {{{}}} in \"{}\"", key, text));
    }
    i = close + 1;
  }
  return out;
}

std::string join_and(const std::vector<std::string>& items) {
  if (items.empty()) return {};
  if (items.size() == 1) return items.front();
  std::vector<std::string> head(items.begin(), items.end() - 1);
  return fmt::format("{} and {}", fmt::join(head, ", "), items.back());
}

std::string capitalize(std::string s) {
  if (!s.empty() && s.front() >= 'a' && s.front() <= 'z') s.front() = static_cast<char>(s.front() - 'a' + 'A');
  return s;
}

}  // namespace

TemplateSet TemplateSet::parse(std::string_view domain_id, std::string_view text) {
  TemplateSet set;
  set.domain_id = std::string(domain_id);
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    auto space = t.find(' ');
    if (eq == std::string::npos || space == std::string::npos || space > eq)
      throw TemplateError(fmt::format("{}.tmpl:{}: expected '<kind> <name> = <text>'", domain_id, number));
    std::string kind = t.substr(0, space);
    std::string name = trim(t.substr(space + 1, eq - space - 1));
    std::string body = trim(t.substr(eq + 1));
    if (name.empty() || body.empty())
      throw TemplateError(fmt::format("{}.tmpl:{}: empty name or text", domain_id, number));
    std::map<std::string, std::string>* target = nullptr;
    if (kind == "type") {
      auto bar = body.find('|');
      if (bar == std::string::npos)
        throw TemplateError(fmt::format("{}.tmpl:{}: type nouns need 'singular | plural'", domain_id, number));
      if (!set.nouns.emplace(name, std::pair{trim(body.substr(0, bar)), trim(body.substr(bar + 1))}).second)
        throw TemplateError(fmt::format("{}.tmpl:{}: duplicate type '{}'", domain_id, number, name));
      continue;
    }
    if (kind == "fact") target = &set.facts;
    else if (kind == "group") target = &set.groups;
    else if (kind == "step") target = &set.steps;
    else throw TemplateError(fmt::format("{}.tmpl:{}: unknown kind '{}'", domain_id, number, kind));
    if (!target->emplace(name, body).second)
      throw TemplateError(fmt::format("{}.tmpl:{}: duplicate {} '{}'", domain_id, number, kind, name));
  }
  return set;
}

void TemplateSet::validate(const pddl::DomainDef& domain) const {
  for (const auto& p : domain.predicates) {
    auto it = facts.find(p.name);
    if (it == facts.end()) throw TemplateError(fmt::format("{}: no fact template for '{}'", domain_id, p.name));
    fill_template(it->second, std::vector<std::string>(p.parameters.size(), "x"));
    if (auto g = groups.find(p.name); g != groups.end()) {
      if (p.parameters.size() != 1)
        throw TemplateError(fmt::format("{}: group template for non-unary '{}'", domain_id, p.name));
      std::string subjects = "x";
      fill_template(g->second, {}, &subjects);
    }
  }
  for (const auto& a : domain.action_schemas) {
    auto it = steps.find(a.name);
    if (it == steps.end()) throw TemplateError(fmt::format("{}: no step template for '{}'", domain_id, a.name));
    fill_template(it->second, std::vector<std::string>(a.parameters.size(), "x"));
  }
  for (const auto& [name, text] : steps)
    if (!domain.find_schema(name)) throw TemplateError(fmt::format("{}: step template for unknown schema '{}'", domain_id, name));
  for (const auto& [name, text] : facts)
    if (!domain.find_predicate(name)) throw TemplateError(fmt::format("{}: fact template for unknown predicate '{}'", domain_id, name));
}

TemplateSet load_templates(std::string_view domain_id, const std::string& dir) {
  if (!dir.empty()) {
    std::string path = fmt::format("{}/{}.tmpl", dir, domain_id);
    std::ifstream in(path);
    if (!in) throw TemplateError(fmt::format("cannot read {}", path));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return TemplateSet::parse(domain_id, buffer.str());
  }
  std::string path = fmt::format("templates/{}.tmpl", domain_id);
  for (const auto& f : embedded::files())
    if (f.path == path) return TemplateSet::parse(domain_id, f.content);
  throw TemplateError(fmt::format("no templates for domain '{}'", domain_id));
}

Verbalizer::Verbalizer(const pddl::DomainDef& domain, TemplateSet templates)
    : domain_(domain), templates_(std::move(templates)) {
  templates_.validate(domain_);
}

Verbalizer::Verbalizer(std::string_view domain_id, const std::string& template_dir)
    : Verbalizer(forge::domain_def(domain_id), load_templates(domain_id, template_dir)) {}

std::string Verbalizer::clause(const pddl::Atom& atom) const {
  return fill_template(templates_.facts.at(atom.predicate), atom.args);
}

std::vector<std::string> Verbalizer::clauses(std::vector<pddl::Atom> atoms,
                                             const pddl::ProblemDef& problem,
                                             bool allow_groups) const {
  // Predicate declaration order, then arguments.
  std::stable_sort(atoms.begin(), atoms.end(), [&](const pddl::Atom& a, const pddl::Atom& b) {
    int ia = domain_.predicate_index(a.predicate), ib = domain_.predicate_index(b.predicate);
    if (ia != ib) return ia < ib;
    return a.args < b.args;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < atoms.size();) {
    std::size_t j = i;
    while (j < atoms.size() && atoms[j].predicate == atoms[i].predicate) ++j;
    auto group = templates_.groups.find(atoms[i].predicate);
    if (allow_groups && group != templates_.groups.end() && j - i >= 2) {
      const auto* decl = domain_.find_predicate(atoms[i].predicate);
      std::size_t population = 0;
      for (const auto& o : problem.objects)
        population += domain_.is_subtype(o.type, decl->parameters[0].type);
      std::string subjects;
      if (population == j - i) {
        subjects = population == 2 ? "both" : fmt::format("all {}", population);
      } else {
        std::vector<std::string> names;
        for (std::size_t k = i; k < j; ++k) names.push_back(atoms[k].args[0]);
        subjects = join_and(names);
      }
      out.push_back(fill_template(group->second, {}, &subjects));
    } else {
      for (std::size_t k = i; k < j; ++k) out.push_back(clause(atoms[k]));
    }
    i = j;
  }
  return out;
}

std::string Verbalizer::render_problem(const pddl::ProblemDef& problem) const {
  std::vector<std::string> sentences;
  std::vector<std::string> type_order;
  for (const auto& t : domain_.types) type_order.push_back(t.name);
  type_order.push_back(std::string(pddl::kObjectType));
  for (const auto& type : type_order) {
    std::vector<std::string> names;
    for (const auto& o : problem.objects)
      if (o.type == type) names.push_back(o.name);
    if (names.empty()) continue;
    auto noun = templates_.nouns.find(type);
    std::pair<std::string, std::string> forms =
        noun != templates_.nouns.end() ? noun->second : std::pair<std::string, std::string>{"object", "objects"};
    if (names.size() == 1)
      sentences.push_back(fmt::format("There is 1 {}: {}.", forms.first, names.front()));
    else
      sentences.push_back(fmt::format("There are {} {}: {}.", names.size(), forms.second, fmt::join(names, ", ")));
  }
  auto init = clauses(problem.init, problem, true);
  if (init.empty()) sentences.push_back("Initially, nothing holds.");
  else sentences.push_back(fmt::format("Initially, {}.", fmt::join(init, "; ")));
  auto goal = clauses(problem.goal, problem, false);
  if (goal.empty()) sentences.push_back("Goal: (already satisfied).");
  else sentences.push_back(fmt::format("Goal: {}.", fmt::join(goal, "; ")));
  return fmt::format("{}", fmt::join(sentences, " "));
}

std::string Verbalizer::render_step(std::string_view schema, const std::vector<std::string>& args) const {
  auto it = templates_.steps.find(std::string(schema));
  if (it == templates_.steps.end())
    throw TemplateError(fmt::format("{}: unknown schema '{}'", templates_.domain_id, schema));
  return capitalize(fill_template(it->second, args));
}

std::string Verbalizer::render_step(const GroundTask& task, ActionId a) const {
  const GroundAction& act = task.actions.at(a);
  return render_step(act.schema, act.args);
}

std::unordered_map<std::string, ActionId> Verbalizer::step_index(const GroundTask& task) const {
  std::unordered_map<std::string, ActionId> out;
  for (const auto& act : task.actions) {
    auto [it, inserted] = out.emplace(render_step(act.schema, act.args), act.id);
    if (!inserted)
      throw TemplateError(fmt::format("{}: {} and {} render to the same sentence", templates_.domain_id,
                                      task.actions[it->second].name(), act.name()));
  }
  return out;
}

std::string render_problem(std::string_view domain_id, const pddl::ProblemDef& problem) {
  return Verbalizer(domain_id).render_problem(problem);
}

std::string render_step(std::string_view domain_id, const GroundTask& task, const State&, ActionId a,
                        bool) {
  return Verbalizer(domain_id).render_step(task, a);
}

}  // namespace plansteps::verbal
