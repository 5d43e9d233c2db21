#include <benchmark/benchmark.h>

#include <random>

#include "qdlab/correlations.hpp"
#include "qdlab/optimizer.hpp"

namespace {

qdlab::PauliComponents fixture_components() {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  qdlab::ComplexMatrix g(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = {n(rng), n(rng)};
  qdlab::ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return qdlab::pauli_components(rho);
}

qdlab::Objective measured_mi_objective() {
  return [pc = fixture_components()](std::span<const double> x) {
    return qdlab::measured_mutual_information(pc, qdlab::measurement_direction(x[0], x[1]),
                                              qdlab::measurement_direction(x[2], x[3]));
  };
}

void BM_GridSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qdlab::AngleGrid grid(2, n, n);
  const auto f = measured_mi_objective();
  for (auto _ : state) benchmark::DoNotOptimize(qdlab::grid_search_serial(grid, f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void BM_GridParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qdlab::AngleGrid grid(2, n, n);
  const auto f = measured_mi_objective();
  for (auto _ : state) benchmark::DoNotOptimize(qdlab::grid_search_parallel(grid, f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

}  // namespace

BENCHMARK(BM_GridSerial)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
