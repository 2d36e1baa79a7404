#include <benchmark/benchmark.h>

#include "kflow/dynamics.hpp"
#include "kflow/experiments.hpp"

namespace {

using namespace kflow;

Params make_params() { return Params(0.1, 0.5, PressureLaw(1.0, 2.0)); }

void BM_rhs_primitive_1d(benchmark::State& state) {
  const Grid grid(static_cast<std::size_t>(state.range(0)), 1.0);
  const Params p = make_params();
  const PrimState s = make_initial_data(grid, "sin", 0.1, 0, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_primitive(s, p));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(grid.size()));
}

void BM_rhs_augmented_1d(benchmark::State& state) {
  const Grid grid(static_cast<std::size_t>(state.range(0)), 1.0);
  const Params p = make_params();
  const AugState s = to_augmented(make_initial_data(grid, "sin", 0.1, 0, 4), p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_augmented(s, p));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(grid.size()));
}

void BM_rhs_augmented_2d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid grid(n, n, 1.0, 1.0);
  const Params p = make_params();
  const AugState s = to_augmented(make_initial_data(grid, "sin", 0.1, 0, 4), p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_augmented(s, p));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(grid.size()));
}

void BM_step_rk4_augmented_1d(benchmark::State& state) {
  const Grid grid(static_cast<std::size_t>(state.range(0)), 1.0);
  const Params p = make_params();
  const AugState s = to_augmented(make_initial_data(grid, "sin", 0.1, 0, 4), p);
  SchemeConfig cfg;
  const double dt = cfl_dt(s, p, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_rk4(s, p, dt));
  }
}

BENCHMARK(BM_rhs_primitive_1d)->Arg(1024);
BENCHMARK(BM_rhs_augmented_1d)->Arg(1024);
BENCHMARK(BM_rhs_augmented_2d)->Arg(128);
BENCHMARK(BM_step_rk4_augmented_1d)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
