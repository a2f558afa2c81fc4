#pragma once

// Grounding of a parsed domain/problem pair into a finite STRIPS task, and the
// transition function over bitset states.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plansteps/pddl.hpp"

namespace plansteps {

using FactId = int;
using ActionId = int;

// Set of true facts as a fixed-width bit vector. Equality and hashing are by
// value, so two states are the same state iff they hold the same facts.
class State {
 public:
  State() = default;
  explicit State(std::size_t num_facts) : words_((num_facts + 63) / 64, 0), size_(num_facts) {}

  std::size_t num_facts() const { return size_; }
  bool test(FactId f) const { return (words_[f >> 6] >> (f & 63)) & 1U; }
  void set(FactId f) { words_[f >> 6] |= std::uint64_t{1} << (f & 63); }
  void reset(FactId f) { words_[f >> 6] &= ~(std::uint64_t{1} << (f & 63)); }
  std::size_t count() const;
  std::vector<FactId> facts() const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::size_t hash() const;

  bool operator==(const State& other) const = default;
  bool operator<(const State& other) const { return words_ < other.words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

struct GroundAction {
  ActionId id = 0;
  std::string schema;
  std::vector<std::string> args;
  std::vector<FactId> pre_pos;  // sorted
  std::vector<FactId> pre_neg;  // sorted
  std::vector<FactId> add;      // sorted
  std::vector<FactId> del;      // sorted
  int cost = 1;

  std::string name() const;  // "stack(a,b)"
};

struct GroundTask {
  std::string domain_name;
  std::string problem_name;
  std::vector<pddl::Atom> facts;  // lexicographic (predicate, args)
  std::vector<GroundAction> actions;
  State init;
  std::vector<FactId> goal;  // sorted
  // Set when a goal atom is not delete-relaxed reachable from init; such a
  // task is unsolvable by construction.
  bool goal_unreachable = false;

  std::size_t num_facts() const { return facts.size(); }
  std::optional<FactId> find_fact(const pddl::Atom& atom) const;
  // Looks an action up by schema and argument names.
  std::optional<ActionId> find_action(std::string_view schema,
                                      const std::vector<std::string>& args) const;
  // Parses "schema(a,b)" or "(schema a b)".
  std::optional<ActionId> find_action(std::string_view text) const;
  bool is_goal(const State& s) const;
  std::vector<pddl::Atom> atoms_of(const State& s) const;
};

GroundTask ground(const pddl::DomainDef& domain, const pddl::ProblemDef& problem);

bool is_applicable(const GroundTask& task, const State& s, ActionId a);
std::vector<ActionId> applicable(const GroundTask& task, const State& s);

class InapplicableAction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// s' = (s \ del) ∪ add. Throws InapplicableAction if a is not applicable.
State apply(const GroundTask& task, const State& s, ActionId a);

}  // namespace plansteps

template <>
struct std::hash<plansteps::State> {
  std::size_t operator()(const plansteps::State& s) const { return s.hash(); }
};
