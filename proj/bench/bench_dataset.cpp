#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

#include "plansteps/forge.hpp"
#include "plansteps/pipeline.hpp"

using namespace plansteps;

namespace {

const std::vector<pipeline::ProblemInstance>& instances() {
  static const auto kInstances = [] {
    std::vector<pipeline::ProblemInstance> out;
    for (const auto& e : forge::catalog()) {
      auto domain = std::make_shared<const pddl::DomainDef>(forge::domain_def(e.domain_id));
      for (std::size_t i = 0; i < 4; ++i) {
        auto g = forge::generate_instance(e.domain_id, {}, forge::instance_seed(11, e.domain_id, i));
        out.push_back({e.domain_id, g.problem.name, domain, g.problem});
      }
    }
    return out;
  }();
  return kInstances;
}

void BM_DatasetSerial(benchmark::State& state) {
  pipeline::PipelineConfig config;
  std::size_t records = 0;
  for (auto _ : state) {
    auto result = pipeline::generate_dataset_serial(instances(), config);
    records = result.records.size();
    benchmark::DoNotOptimize(result);
  }
  state.counters["records"] = static_cast<double>(records);
}

void BM_DatasetParallel(benchmark::State& state) {
  pipeline::PipelineConfig config;
  const int workers = static_cast<int>(state.range(0));
  std::size_t records = 0;
  for (auto _ : state) {
    auto result = pipeline::generate_dataset(instances(), config, workers);
    records = result.records.size();
    benchmark::DoNotOptimize(result);
  }
  state.counters["records"] = static_cast<double>(records);
}

}  // namespace

BENCHMARK(BM_DatasetSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DatasetParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);
  benchmark::Initialize(&argc, argv);
  instances();
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
}
