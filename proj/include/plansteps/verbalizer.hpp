#pragma once

// Template-driven English rendering of problems and ground actions.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "plansteps/grounder.hpp"
#include "plansteps/pddl.hpp"

namespace plansteps::verbal {

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TemplateSet {
  std::string domain_id;
  std::map<std::string, std::pair<std::string, std::string>> nouns;  // type -> singular, plural
  std::map<std::string, std::string> facts;                          // predicate -> clause
  std::map<std::string, std::string> groups;                         // predicate -> grouped clause
  std::map<std::string, std::string> steps;                          // schema -> sentence

  static TemplateSet parse(std::string_view domain_id, std::string_view text);
  // Every predicate needs a fact line and every schema a step line; types
  // with objects need a noun. Throws TemplateError naming the gap.
  void validate(const pddl::DomainDef& domain) const;
};

// Built-in templates, or `<dir>/<domain_id>.tmpl` when dir is non-empty.
TemplateSet load_templates(std::string_view domain_id, const std::string& dir = {});

class Verbalizer {
 public:
  Verbalizer(const pddl::DomainDef& domain, TemplateSet templates);
  // Built-in domain and templates.
  explicit Verbalizer(std::string_view domain_id, const std::string& template_dir = {});

  const std::string& domain_id() const { return templates_.domain_id; }

  std::string render_problem(const pddl::ProblemDef& problem) const;
  std::string render_step(std::string_view schema, const std::vector<std::string>& args) const;
  std::string render_step(const GroundTask& task, ActionId a) const;

  // Sentence -> action for every ground action of the task. Throws
  // TemplateError if two actions share a sentence.
  std::unordered_map<std::string, ActionId> step_index(const GroundTask& task) const;

 private:
  std::string clause(const pddl::Atom& atom) const;
  std::vector<std::string> clauses(std::vector<pddl::Atom> atoms, const pddl::ProblemDef& problem,
                                   bool allow_groups) const;

  pddl::DomainDef domain_;
  TemplateSet templates_;
};

// Convenience wrappers over the built-in templates. The state and the
// verdict never influence the sentence; the parameters exist so call sites
// read like the transition they describe.
std::string render_problem(std::string_view domain_id, const pddl::ProblemDef& problem);
std::string render_step(std::string_view domain_id, const GroundTask& task, const State& s,
                        ActionId a, bool verdict_hidden = true);

}  // namespace plansteps::verbal
