#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

#include "plansteps/search.hpp"

namespace plansteps {

std::string_view to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::LmCut: return "lmcut";
    case HeuristicKind::HMax: return "hmax";
    case HeuristicKind::Blind: return "blind";
  }
  return "?";
}

std::optional<HeuristicKind> heuristic_from_string(std::string_view name) {
  if (name == "lmcut") return HeuristicKind::LmCut;
  if (name == "hmax") return HeuristicKind::HMax;
  if (name == "blind") return HeuristicKind::Blind;
  return std::nullopt;
}

namespace {

// Delete relaxation of a task with two artificial facts: one that is always
// true (precondition of operators without preconditions) and one reached only
// through a zero-cost goal operator.
class RelaxedTask {
 public:
  struct Op {
    std::vector<int> pre;
    std::vector<int> eff;
    int base_cost = 1;
    int cost = 1;
    int supporter = -1;
    int unsatisfied = 0;
    int hmax = kInfinity;
  };
  struct Fact {
    std::vector<int> precondition_of;
    std::vector<int> achievers;
    int hmax = kInfinity;
    bool closed = false;
    bool goal_zone = false;
    bool reached = false;
  };

  explicit RelaxedTask(const GroundTask& task) {
    const int n = static_cast<int>(task.num_facts());
    true_fact_ = n;
    goal_fact_ = n + 1;
    facts_.resize(n + 2);
    for (const auto& a : task.actions) {
      Op op;
      op.pre = a.pre_pos.empty() ? std::vector<int>{true_fact_} : a.pre_pos;
      op.eff = a.add;
      op.base_cost = a.cost;
      ops_.push_back(std::move(op));
    }
    Op goal_op;
    goal_op.pre = task.goal.empty() ? std::vector<int>{true_fact_} : task.goal;
    if (task.goal_unreachable) goal_op.pre.push_back(n + 2);  // never reachable
    goal_op.eff = {goal_fact_};
    goal_op.base_cost = 0;
    ops_.push_back(std::move(goal_op));
    facts_.resize(n + 3);
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      for (int f : ops_[i].pre) facts_[f].precondition_of.push_back(static_cast<int>(i));
      for (int f : ops_[i].eff) facts_[f].achievers.push_back(static_cast<int>(i));
    }
  }

  int hmax(const State& s) {
    for (auto& op : ops_) op.cost = op.base_cost;
    explore(s);
    return facts_[goal_fact_].hmax;
  }

  int lmcut(const State& s) {
    for (auto& op : ops_) op.cost = op.base_cost;
    explore(s);
    if (facts_[goal_fact_].hmax == kInfinity) return kInfinity;
    int total = 0;
    std::vector<int> cut;
    while (facts_[goal_fact_].hmax != 0) {
      for (auto& f : facts_) f.goal_zone = false;
      mark_goal_zone(goal_fact_);
      find_cut(s, cut);
      if (cut.empty()) throw std::logic_error("lmcut: empty cut with positive hmax");
      int cut_cost = kInfinity;
      for (int o : cut) cut_cost = std::min(cut_cost, ops_[o].cost);
      for (int o : cut) ops_[o].cost -= cut_cost;
      total += cut_cost;
      explore(s);
    }
    return total;
  }

 private:
  void explore(const State& s) {
    for (auto& f : facts_) {
      f.hmax = kInfinity;
      f.closed = false;
    }
    for (auto& op : ops_) {
      op.unsatisfied = static_cast<int>(op.pre.size());
      op.hmax = kInfinity;
      op.supporter = -1;
    }
    using Entry = std::pair<int, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    auto push = [&](int f, int cost) {
      if (cost < facts_[f].hmax) {
        facts_[f].hmax = cost;
        queue.emplace(cost, f);
      }
    };
    for (FactId f : s.facts()) push(f, 0);
    push(true_fact_, 0);
    while (!queue.empty()) {
      auto [cost, f] = queue.top();
      queue.pop();
      if (facts_[f].closed || cost != facts_[f].hmax) continue;
      facts_[f].closed = true;
      for (int o : facts_[f].precondition_of) {
        Op& op = ops_[o];
        if (--op.unsatisfied > 0) continue;
        // Facts close in nondecreasing cost order, so the last precondition
        // to close is a most expensive one.
        op.supporter = f;
        op.hmax = cost + op.cost;
        for (int e : op.eff) push(e, op.hmax);
      }
    }
  }

  void mark_goal_zone(int f) {
    std::vector<int> stack{f};
    facts_[f].goal_zone = true;
    while (!stack.empty()) {
      int g = stack.back();
      stack.pop_back();
      for (int o : facts_[g].achievers) {
        const Op& op = ops_[o];
        if (op.cost != 0 || op.supporter < 0) continue;
        if (!facts_[op.supporter].goal_zone) {
          facts_[op.supporter].goal_zone = true;
          stack.push_back(op.supporter);
        }
      }
    }
  }

  // Operators whose supporter lies in the zone reachable from s without
  // entering the goal zone, and that achieve a goal-zone fact.
  void find_cut(const State& s, std::vector<int>& cut) {
    cut.clear();
    for (auto& f : facts_) f.reached = false;
    std::vector<bool> in_cut(ops_.size(), false);
    std::vector<int> stack;
    auto reach = [&](int f) {
      if (!facts_[f].reached) {
        facts_[f].reached = true;
        stack.push_back(f);
      }
    };
    for (FactId f : s.facts()) reach(f);
    reach(true_fact_);
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      for (int o : facts_[f].precondition_of) {
        const Op& op = ops_[o];
        if (op.supporter != f) continue;
        bool to_goal_zone = false;
        for (int e : op.eff) to_goal_zone |= facts_[e].goal_zone;
        if (to_goal_zone) {
          if (!in_cut[o]) {
            in_cut[o] = true;
            cut.push_back(o);
          }
          continue;
        }
        for (int e : op.eff) reach(e);
      }
    }
  }

  std::vector<Op> ops_;
  std::vector<Fact> facts_;
  int true_fact_ = 0;
  int goal_fact_ = 0;
};

class HMaxHeuristic : public Heuristic {
 public:
  explicit HMaxHeuristic(const GroundTask& task) : relaxed_(task) {}
  int evaluate(const State& s) override { return relaxed_.hmax(s); }

 private:
  RelaxedTask relaxed_;
};

class LmCutHeuristic : public Heuristic {
 public:
  explicit LmCutHeuristic(const GroundTask& task) : relaxed_(task) {}
  int evaluate(const State& s) override { return relaxed_.lmcut(s); }

 private:
  RelaxedTask relaxed_;
};

class BlindHeuristic : public Heuristic {
 public:
  explicit BlindHeuristic(const GroundTask& task) : task_(task) {}
  int evaluate(const State& s) override {
    if (task_.goal_unreachable) return kInfinity;
    return task_.is_goal(s) ? 0 : 1;
  }

 private:
  const GroundTask& task_;
};

}  // namespace

std::unique_ptr<Heuristic> make_heuristic(HeuristicKind kind, const GroundTask& task) {
  switch (kind) {
    case HeuristicKind::LmCut: return std::make_unique<LmCutHeuristic>(task);
    case HeuristicKind::HMax: return std::make_unique<HMaxHeuristic>(task);
    case HeuristicKind::Blind: return std::make_unique<BlindHeuristic>(task);
  }
  return nullptr;
}

int h_max(const GroundTask& task, const State& s) { return RelaxedTask(task).hmax(s); }

int h_lmcut(const GroundTask& task, const State& s) { return RelaxedTask(task).lmcut(s); }

}  // namespace plansteps
