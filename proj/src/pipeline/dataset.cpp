#include <algorithm>
#include <exception>
#include <set>

#include <fmt/format.h>
#include <omp.h>
#include <spdlog/spdlog.h>

#include "plansteps/pipeline.hpp"
#include "plansteps/verbalizer.hpp"

namespace plansteps::pipeline {

std::string make_record_id(const std::string& problem_id, int step_index, const std::string& action_name) {
  return fmt::format("{}:{}:{}", problem_id, step_index, action_name);
}

std::uint64_t problem_seed(std::uint64_t master, const std::string& domain_id, const std::string& problem_id) {
  return derive_seed(derive_seed(master, domain_id), problem_id);
}

DatasetResult generate_instance_records(const ProblemInstance& instance, const PipelineConfig& config) {
  DatasetResult out;
  const DomainConfig dc = config.for_domain(instance.domain_id);
  auto drop = [&](std::string reason) {
    spdlog::warn("dropping {}/{}: {}", instance.domain_id, instance.problem_id, reason);
    DatasetResult dropped;
    dropped.dropped.push_back({instance.domain_id, instance.problem_id, std::move(reason)});
    return dropped;
  };

  GroundTask task = ground(*instance.domain, instance.problem);
  if (task.goal_unreachable) return drop("goal unreachable under delete relaxation");

  verbal::Verbalizer verbalizer(*instance.domain, verbal::load_templates(instance.domain_id, config.template_dir));
  ActionEvaluator evaluator(task, HeuristicKind::LmCut, config.limits);
  const std::uint64_t seed = problem_seed(config.seed, instance.domain_id, instance.problem_id);

  try {
    const Plan* initial = evaluator.plan_from(task.init);
    if (!initial) return drop("unsolvable");
    const int optimal_cost = initial->cost;
    const std::string problem_nl = verbalizer.render_problem(instance.problem);

    TrajectoryContext ctx(task.init);
    std::vector<StepText> prefix;
    while (!task.is_goal(ctx.current())) {
      const int k = static_cast<int>(ctx.step_index());
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
      std::vector<ActionId> candidates = get_rand_actions(task, ctx, dc.y, rng, dc.p_inapp);
      std::sort(candidates.begin(), candidates.end());
      for (ActionId a : candidates) {
        ActionVerdict verdict = evaluator.evaluate(ctx, a);
        DatasetRecord r;
        r.record_id = make_record_id(instance.problem_id, k, task.actions[a].name());
        r.domain_id = instance.domain_id;
        r.problem_id = instance.problem_id;
        r.problem_nl = problem_nl;
        r.prefix_steps = prefix;
        r.candidate_step = verbalizer.render_step(task, a);
        r.category = verdict.category;
        r.reward = verdict.reward;
        r.step_index = k;
        r.seed = config.seed;
        r.optimal_cost = optimal_cost;
        r.y = dc.y;
        r.p_inapp = dc.p_inapp;
        r.candidate_action = a;
        out.records.push_back(std::move(r));
      }
      ActionId best = evaluator.optimal_action(ctx.current());
      prefix.push_back({verbalizer.render_step(task, best), 1.0});
      ctx.advance(apply(task, ctx.current(), best));
    }
    out.problems.push_back({instance.domain_id, instance.problem_id, optimal_cost, out.records.size()});
  } catch (const PlannerLimitExceeded& e) {
    return drop(fmt::format("planner limit: {}", e.what()));
  }
  return out;
}

namespace {

void check_unique(const std::vector<ProblemInstance>& instances) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& i : instances)
    if (!seen.emplace(i.domain_id, i.problem_id).second)
      throw std::invalid_argument(fmt::format("duplicate problem {}/{}", i.domain_id, i.problem_id));
}

DatasetResult merge(std::vector<DatasetResult>& parts) {
  DatasetResult out;
  for (auto& p : parts) {
    std::move(p.records.begin(), p.records.end(), std::back_inserter(out.records));
    std::move(p.problems.begin(), p.problems.end(), std::back_inserter(out.problems));
    std::move(p.dropped.begin(), p.dropped.end(), std::back_inserter(out.dropped));
  }
  std::stable_sort(out.records.begin(), out.records.end(), [](const DatasetRecord& a, const DatasetRecord& b) {
    return std::tie(a.domain_id, a.problem_id, a.step_index, a.candidate_action) <
           std::tie(b.domain_id, b.problem_id, b.step_index, b.candidate_action);
  });
  std::sort(out.problems.begin(), out.problems.end(), [](const ProblemSummary& a, const ProblemSummary& b) {
    return std::tie(a.domain_id, a.problem_id) < std::tie(b.domain_id, b.problem_id);
  });
  std::sort(out.dropped.begin(), out.dropped.end(), [](const DroppedInstance& a, const DroppedInstance& b) {
    return std::tie(a.domain_id, a.problem_id) < std::tie(b.domain_id, b.problem_id);
  });
  return out;
}

}  // namespace

DatasetResult generate_dataset_serial(const std::vector<ProblemInstance>& instances, const PipelineConfig& config) {
  check_unique(instances);
  std::vector<DatasetResult> parts;
  parts.reserve(instances.size());
  for (const auto& instance : instances) parts.push_back(generate_instance_records(instance, config));
  return merge(parts);
}

DatasetResult generate_dataset(const std::vector<ProblemInstance>& instances, const PipelineConfig& config,
                               int workers) {
  check_unique(instances);
  if (workers <= 0) workers = omp_get_num_procs();
  std::vector<DatasetResult> parts(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  const auto n = static_cast<std::ptrdiff_t>(instances.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      parts[i] = generate_instance_records(instances[i], config);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return merge(parts);
}

}  // namespace plansteps::pipeline
