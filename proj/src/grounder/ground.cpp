#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <set>

#include <fmt/format.h>

#include "plansteps/grounder.hpp"

namespace plansteps {

std::size_t State::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<FactId> State::facts() const {
  std::vector<FactId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      out.push_back(static_cast<FactId>(i * 64 + std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::size_t State::hash() const {
  std::uint64_t h = 0x84222325cbf29ce4ULL ^ size_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string GroundAction::name() const {
  return fmt::format("{}({})", schema, fmt::join(args, ","));
}

std::optional<FactId> GroundTask::find_fact(const pddl::Atom& atom) const {
  auto it = std::lower_bound(facts.begin(), facts.end(), atom);
  if (it == facts.end() || *it != atom) return std::nullopt;
  return static_cast<FactId>(it - facts.begin());
}

std::optional<ActionId> GroundTask::find_action(std::string_view schema,
                                                const std::vector<std::string>& args) const {
  auto less = [](const GroundAction& a, const std::pair<std::string_view, const std::vector<std::string>*>& key) {
    if (a.schema != key.first) return a.schema < key.first;
    return a.args < *key.second;
  };
  auto key = std::make_pair(schema, &args);
  auto it = std::lower_bound(actions.begin(), actions.end(), key, less);
  if (it == actions.end() || it->schema != schema || it->args != args) return std::nullopt;
  return it->id;
}

std::optional<ActionId> GroundTask::find_action(std::string_view text) const {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c == '(' || c == ')' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  if (tokens.empty()) return std::nullopt;
  std::string schema = tokens.front();
  tokens.erase(tokens.begin());
  return find_action(schema, tokens);
}

bool GroundTask::is_goal(const State& s) const {
  if (goal_unreachable) return false;
  return std::all_of(goal.begin(), goal.end(), [&](FactId f) { return s.test(f); });
}

std::vector<pddl::Atom> GroundTask::atoms_of(const State& s) const {
  std::vector<pddl::Atom> out;
  for (FactId f : s.facts()) out.push_back(facts[f]);
  return out;
}

bool is_applicable(const GroundTask& task, const State& s, ActionId a) {
  const GroundAction& act = task.actions[a];
  for (FactId f : act.pre_pos)
    if (!s.test(f)) return false;
  for (FactId f : act.pre_neg)
    if (s.test(f)) return false;
  return true;
}

std::vector<ActionId> applicable(const GroundTask& task, const State& s) {
  std::vector<ActionId> out;
  for (const auto& act : task.actions)
    if (is_applicable(task, s, act.id)) out.push_back(act.id);
  return out;
}

State apply(const GroundTask& task, const State& s, ActionId a) {
  if (a < 0 || static_cast<std::size_t>(a) >= task.actions.size())
    throw InapplicableAction(fmt::format("action id {} out of range", a));
  if (!is_applicable(task, s, a))
    throw InapplicableAction(
        fmt::format("{} is not applicable in this state", task.actions[a].name()));
  State next = s;
  const GroundAction& act = task.actions[a];
  for (FactId f : act.del) next.reset(f);
  for (FactId f : act.add) next.set(f);
  return next;
}

namespace {

using Binding = std::vector<int>;  // parameter index -> object index, -1 unbound

struct SchemaInfo {
  const pddl::ActionSchema* schema = nullptr;
  // Literal argument -> parameter index.
  std::vector<std::vector<int>> positive;  // indices into precondition
  std::vector<std::vector<int>> literal_params;
  std::vector<std::vector<int>> candidates;  // per parameter: type-correct objects
};

class Grounder {
 public:
  Grounder(const pddl::DomainDef& domain, const pddl::ProblemDef& problem)
      : domain_(domain), problem_(problem) {
    for (const auto& o : problem.objects) objects_.push_back(o);
    std::sort(objects_.begin(), objects_.end(),
              [](const pddl::TypedName& a, const pddl::TypedName& b) { return a.name < b.name; });
  }

  GroundTask run() {
    std::vector<SchemaInfo> infos;
    for (const auto& schema : domain_.action_schemas) infos.push_back(prepare(schema));

    for (const auto& atom : problem_.init) add_reached(atom);
    // Delete-relaxed fixpoint: keep instantiating schemas against the reached
    // facts until no new fact appears.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t s = 0; s < infos.size(); ++s) {
        std::vector<std::vector<std::string>> found;
        enumerate(infos[s], found);
        for (auto& args : found) {
          if (!instantiated_.insert({s, args}).second) continue;
          for (const auto& eff : infos[s].schema->add_effects)
            changed |= add_reached(substitute(eff, *infos[s].schema, args));
        }
      }
    }
    return build(infos);
  }

 private:
  SchemaInfo prepare(const pddl::ActionSchema& schema) {
    SchemaInfo info;
    info.schema = &schema;
    for (const auto& p : schema.parameters) {
      std::vector<int> objs;
      for (std::size_t i = 0; i < objects_.size(); ++i)
        if (domain_.is_subtype(objects_[i].type, p.type)) objs.push_back(static_cast<int>(i));
      info.candidates.push_back(std::move(objs));
    }
    for (const auto& lit : schema.precondition) {
      std::vector<int> params;
      for (const auto& arg : lit.atom.args) params.push_back(param_index(schema, arg));
      info.literal_params.push_back(params);
    }
    return info;
  }

  static int param_index(const pddl::ActionSchema& schema, const std::string& var) {
    for (std::size_t i = 0; i < schema.parameters.size(); ++i)
      if (schema.parameters[i].name == var) return static_cast<int>(i);
    return -1;
  }

  pddl::Atom substitute(const pddl::Atom& atom, const pddl::ActionSchema& schema,
                        const std::vector<std::string>& args) const {
    pddl::Atom out{atom.predicate, {}};
    for (const auto& a : atom.args) out.args.push_back(args[param_index(schema, a)]);
    return out;
  }

  bool add_reached(const pddl::Atom& atom) {
    if (!reached_.insert(atom).second) return false;
    by_predicate_[atom.predicate].push_back(atom);
    return true;
  }

  // Join over positive preconditions in a greedy order (most bound variables
  // first), then free enumeration of parameters not mentioned by any of them.
  void enumerate(const SchemaInfo& info, std::vector<std::vector<std::string>>& out) {
    const auto& pre = info.schema->precondition;
    std::vector<int> pending;
    for (std::size_t i = 0; i < pre.size(); ++i)
      if (!pre[i].negated && !pre[i].is_equality()) pending.push_back(static_cast<int>(i));
    Binding binding(info.schema->parameters.size(), -1);
    join(info, pending, binding, out);
  }

  void join(const SchemaInfo& info, std::vector<int> pending, Binding& binding,
            std::vector<std::vector<std::string>>& out) {
    if (pending.empty()) {
      free_params(info, 0, binding, out);
      return;
    }
    auto bound_count = [&](int lit) {
      int n = 0;
      for (int p : info.literal_params[lit]) n += binding[p] >= 0;
      return n - static_cast<int>(info.literal_params[lit].size());
    };
    auto best = std::max_element(pending.begin(), pending.end(),
                                 [&](int a, int b) { return bound_count(a) < bound_count(b); });
    int lit = *best;
    pending.erase(best);
    const pddl::Atom& atom = info.schema->precondition[lit].atom;
    auto it = by_predicate_.find(atom.predicate);
    if (it == by_predicate_.end()) return;
    const auto& params = info.literal_params[lit];
    for (std::size_t f = 0; f < it->second.size(); ++f) {
      const pddl::Atom& fact = it->second[f];
      Binding saved = binding;
      bool ok = true;
      for (std::size_t k = 0; k < params.size() && ok; ++k) {
        int obj = object_index(fact.args[k]);
        int& slot = binding[params[k]];
        if (slot >= 0) {
          ok = slot == obj;
        } else {
          const auto& cands = info.candidates[params[k]];
          ok = std::binary_search(cands.begin(), cands.end(), obj);
          if (ok) slot = obj;
        }
      }
      if (ok && equalities_hold(info, binding)) join(info, pending, binding, out);
      binding = std::move(saved);
    }
  }

  void free_params(const SchemaInfo& info, std::size_t p, Binding& binding,
                   std::vector<std::vector<std::string>>& out) {
    if (p == binding.size()) {
      if (!equalities_hold(info, binding)) return;
      std::vector<std::string> args;
      for (int obj : binding) args.push_back(objects_[obj].name);
      out.push_back(std::move(args));
      return;
    }
    if (binding[p] >= 0) {
      free_params(info, p + 1, binding, out);
      return;
    }
    for (int obj : info.candidates[p]) {
      binding[p] = obj;
      if (equalities_hold(info, binding)) free_params(info, p + 1, binding, out);
    }
    binding[p] = -1;
  }

  // Checks equality literals whose parameters are all bound.
  static bool equalities_hold(const SchemaInfo& info, const Binding& binding) {
    const auto& pre = info.schema->precondition;
    for (std::size_t i = 0; i < pre.size(); ++i) {
      if (!pre[i].is_equality()) continue;
      int a = binding[info.literal_params[i][0]];
      int b = binding[info.literal_params[i][1]];
      if (a < 0 || b < 0) continue;
      if ((a == b) == pre[i].negated) return false;
    }
    return true;
  }

  int object_index(const std::string& name) const {
    auto it = std::lower_bound(
        objects_.begin(), objects_.end(), name,
        [](const pddl::TypedName& o, const std::string& n) { return o.name < n; });
    return static_cast<int>(it - objects_.begin());
  }

  GroundTask build(const std::vector<SchemaInfo>& infos) {
    GroundTask task;
    task.domain_name = domain_.name;
    task.problem_name = problem_.name;
    std::set<pddl::Atom> universe = reached_;
    for (const auto& g : problem_.goal) {
      if (!reached_.count(g)) task.goal_unreachable = true;
      universe.insert(g);
    }
    task.facts.assign(universe.begin(), universe.end());

    task.init = State(task.facts.size());
    for (const auto& atom : problem_.init) task.init.set(*task.find_fact(atom));
    for (const auto& atom : problem_.goal) task.goal.push_back(*task.find_fact(atom));
    std::sort(task.goal.begin(), task.goal.end());
    task.goal.erase(std::unique(task.goal.begin(), task.goal.end()), task.goal.end());

    auto ids = [&](const pddl::Atom& atom) { return task.find_fact(atom); };
    auto normalize = [](std::vector<FactId>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    for (const auto& [schema_index, args] : instantiated_) {
      const pddl::ActionSchema& schema = *infos[schema_index].schema;
      GroundAction act;
      act.schema = schema.name;
      act.args = args;
      for (const auto& lit : schema.precondition) {
        if (lit.is_equality()) continue;
        auto f = ids(substitute(lit.atom, schema, args));
        if (!lit.negated) act.pre_pos.push_back(*f);
        else if (f) act.pre_neg.push_back(*f);  // facts outside the universe are never true
      }
      for (const auto& eff : schema.add_effects) act.add.push_back(*ids(substitute(eff, schema, args)));
      for (const auto& eff : schema.delete_effects)
        if (auto f = ids(substitute(eff, schema, args))) act.del.push_back(*f);
      normalize(act.pre_pos);
      normalize(act.pre_neg);
      normalize(act.add);
      normalize(act.del);
      // Add wins when an instantiation makes an atom both added and deleted.
      std::erase_if(act.del, [&](FactId f) { return std::binary_search(act.add.begin(), act.add.end(), f); });
      bool contradictory = std::any_of(act.pre_neg.begin(), act.pre_neg.end(), [&](FactId f) {
        return std::binary_search(act.pre_pos.begin(), act.pre_pos.end(), f);
      });
      if (!contradictory) task.actions.push_back(std::move(act));
    }
    std::sort(task.actions.begin(), task.actions.end(), [](const GroundAction& a, const GroundAction& b) {
      return std::tie(a.schema, a.args) < std::tie(b.schema, b.args);
    });
    for (std::size_t i = 0; i < task.actions.size(); ++i) task.actions[i].id = static_cast<ActionId>(i);
    return task;
  }

  const pddl::DomainDef& domain_;
  const pddl::ProblemDef& problem_;
  std::vector<pddl::TypedName> objects_;
  std::set<pddl::Atom> reached_;
  std::map<std::string, std::vector<pddl::Atom>> by_predicate_;
  std::set<std::pair<std::size_t, std::vector<std::string>>> instantiated_;
};

}  // namespace

GroundTask ground(const pddl::DomainDef& domain, const pddl::ProblemDef& problem) {
  return Grounder(domain, problem).run();
}

}  // namespace plansteps
