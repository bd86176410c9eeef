// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "cbmai/catalog.hpp"
#include "cbmai/hardness.hpp"
#include "cbmai/harness.hpp"

namespace {

void BM_CountErrors(benchmark::State& state) {
  const auto execution = state.range(0) == 0 ? cbmai::Execution::Serial : cbmai::Execution::Parallel;
  const auto algorithm = static_cast<cbmai::Algorithm>(state.range(1));
  const cbmai::Instance instance = cbmai::builtin_instance("D1P");
  const cbmai::TrueOptimum truth = cbmai::true_optimum(instance);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbmai::count_errors(instance, truth, algorithm, 4000, 64, 1, execution));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_CountErrors)
    ->ArgsProduct({{0, 1}, {0, 1, 2}})
    ->ArgNames({"parallel", "algo"})
    ->Unit(benchmark::kMillisecond);

void BM_GapReport(benchmark::State& state) {
  const auto execution = state.range(0) == 0 ? cbmai::Execution::Serial : cbmai::Execution::Parallel;
  const cbmai::Instance instance = cbmai::builtin_instance("E1");
  cbmai::GapOptions options;
  options.restarts = 16;
  for (auto _ : state) benchmark::DoNotOptimize(cbmai::gap_report(instance, options, execution));
}
BENCHMARK(BM_GapReport)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_IvScores(benchmark::State& state) {
  const cbmai::Instance instance = cbmai::builtin_instance("D1P");
  cbmai::EmpiricalState es(instance.K0, instance.L);
  cbmai::NormalStream rng(7);
  for (int a = 0; a < instance.K0; ++a) es.pull(instance, a, 10, rng);
  std::vector<int> cols(instance.num_vars());
  for (int i = 0; i < instance.num_vars(); ++i) cols[i] = i;
  const cbmai::EmpiricalLp view = cbmai::empirical_views(es, instance, cols);
  for (auto _ : state) benchmark::DoNotOptimize(cbmai::iv_scores(view));
}
BENCHMARK(BM_IvScores)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
