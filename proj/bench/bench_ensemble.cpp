#include <benchmark/benchmark.h>

#include "ncsir/analysis.hpp"
#include "ncsir/equilibria.hpp"
#include "ncsir/scenario.hpp"

namespace {

const ncsir::Scenario& fig1() {
  static const ncsir::Scenario sc = ncsir::preset("fig1");
  return sc;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto& sc = fig1();
  const ncsir::State target = ncsir::solve_dfe(sc.params).front().as_state();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ncsir::ensemble_ms_serial(sc.params, sc.x0, target, sc.cfg, 1, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto& sc = fig1();
  const ncsir::State target = ncsir::solve_dfe(sc.params).front().as_state();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ncsir::ensemble_ms(sc.params, sc.x0, target, sc.cfg, 1, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(64)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(64)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
