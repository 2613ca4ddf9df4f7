#include <benchmark/benchmark.h>

#include <random>

#include "morphflow/geometry.hpp"
#include "morphflow/lifting.hpp"
#include "morphflow/tvl1.hpp"
#include "morphflow/volume.hpp"

namespace {

using namespace morphflow;

Volume random_volume(int n, unsigned seed) {
  LatticeDescriptor lat;
  lat.extents = {n, n, n};
  Volume vol(lat);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& v : vol.data) v = dist(rng);
  return vol;
}

void BM_AnalyzeCycle(benchmark::State& state) {
  const Volume vol = random_volume(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(vol, 3, LiftingMode::Min));
  }
}
BENCHMARK(BM_AnalyzeCycle)->Arg(32)->Arg(64);

void BM_Gradient(benchmark::State& state) {
  const Volume vol = random_volume(static_cast<int>(state.range(0)), 2);
  const LatticeOperators ops(vol.lattice);
  VectorField grad(vol.lattice);
  for (auto _ : state) {
    ops.gradient(vol.data, grad);
    benchmark::DoNotOptimize(grad.u.data());
  }
}
BENCHMARK(BM_Gradient)->Arg(32)->Arg(64);

void BM_Warp(benchmark::State& state) {
  const Volume vol = random_volume(static_cast<int>(state.range(0)), 3);
  DisplacementField field(vol.lattice);
  for (std::int64_t i = 0; i < vol.lattice.num_sites(); ++i) {
    field.set(i, {0.3, -0.2, 0.1});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(warp(vol, field));
  }
}
BENCHMARK(BM_Warp)->Arg(32)->Arg(64);

void BM_SolveLevel(benchmark::State& state) {
  const Volume fixed = random_volume(16, 4);
  const Volume moving = random_volume(16, 5);
  const DisplacementField init(fixed.lattice);
  SolverParams params;
  params.warps = 2;
  params.inner_iters = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_level(fixed, moving, init, params));
  }
}
BENCHMARK(BM_SolveLevel);

}  // namespace

BENCHMARK_MAIN();
