// Round-throughput comparison: parallel engine vs the serial reference.

#include <benchmark/benchmark.h>

#include "affectsim/engine.hpp"
#include "affectsim/reference.hpp"

namespace {

using namespace affectsim;

SimConfig bench_config(int n) {
  SimConfig cfg;
  cfg.num_all = n;
  cfg.seed = 1234;
  cfg.fragments = {{21, 30}, {17, 54}, {1, 16}, {6, 20}, {19, 19}, {9, 8}, {17, 33}};
  return cfg;
}

void BM_EngineRun(benchmark::State& state) {
  const SimConfig cfg = bench_config(static_cast<int>(state.range(0)));
  Prepared prep = prepare(cfg);
  const DynamicsParams params{cfg.esef, cfg.weights, cfg.mutation, cfg.gamma_forget};
  for (auto _ : state) {
    Engine engine(prep.graph, prep.codes, prep.schedule, params, cfg.seed);
    benchmark::DoNotOptimize(engine.run_all());
  }
  state.SetItemsProcessed(state.iterations() * cfg.total_rounds() * cfg.num_all);
}

void BM_ReferenceRun(benchmark::State& state) {
  const SimConfig cfg = bench_config(static_cast<int>(state.range(0)));
  Prepared prep = prepare(cfg);
  const DynamicsParams params{cfg.esef, cfg.weights, cfg.mutation, cfg.gamma_forget};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::run(prep.graph, prep.codes, prep.schedule, params, cfg.seed));
  }
  state.SetItemsProcessed(state.iterations() * cfg.total_rounds() * cfg.num_all);
}

}  // namespace

BENCHMARK(BM_EngineRun)->Arg(600)->Arg(3000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReferenceRun)->Arg(600)->Arg(3000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
