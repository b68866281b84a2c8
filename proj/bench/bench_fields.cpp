#include <benchmark/benchmark.h>
#include <omp.h>

#include "tunnellab/wavepackets.hpp"

namespace {

tl::PhysicalConfig bench_config() {
  tl::PhysicalConfig c;
  c.V0 = 4.5;
  c.L = 1.0;
  c.k0 = 2.0;
  c.x0 = -6.0;
  return c;
}

void BM_propagate_serial(benchmark::State& state) {
  tl::PhysicalConfig c = bench_config();
  tl::SpatialGrid g{-15.0, 15.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(tl::propagate_fixed(tl::Component::Total, g, 2.0, c, 4096, false));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_propagate_parallel(benchmark::State& state) {
  tl::PhysicalConfig c = bench_config();
  tl::SpatialGrid g{-15.0, 15.0, static_cast<int>(state.range(0))};
  state.counters["threads"] = omp_get_max_threads();
  for (auto _ : state) benchmark::DoNotOptimize(tl::propagate_fixed(tl::Component::Total, g, 2.0, c, 4096, true));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_propagate_serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_propagate_parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
