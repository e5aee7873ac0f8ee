#include <benchmark/benchmark.h>

#include "capflow/operators.hpp"
#include "capflow/solver.hpp"
#include "capflow/traveling_wave.hpp"

namespace {

using namespace capflow;

void BM_EvalG(benchmark::State& state) {
  const auto op = OperatorSpec::power_curvature(2.0);
  (void)op.G(0.0);  // build the table outside the loop
  double p = -8.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.G(p));
    p += 0.37;
    if (p > 8.0) p = -8.0;
  }
}
BENCHMARK(BM_EvalG);

void BM_GInverse(benchmark::State& state) {
  const auto op = OperatorSpec::power_curvature(2.0);
  const double g_inf = op.G_infinity();
  double y = 0.1 * g_inf;
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.G_inv(y));
    y += 0.11 * g_inf;
    if (y >= g_inf) y -= g_inf * 0.97;
  }
}
BENCHMARK(BM_GInverse);

void BM_ProfileBuild(benchmark::State& state) {
  const auto op = OperatorSpec::power_curvature(2.0);
  (void)op.G_infinity();
  for (auto _ : state) {
    benchmark::DoNotOptimize(profile(op, 1.0, static_cast<int>(state.range(0))));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProfileBuild)->Range(257, 4097)->Complexity();

void BM_BoundaryIncrement(benchmark::State& state) {
  const auto op = OperatorSpec::power_curvature(2.0);
  (void)op.G_infinity();
  const double c = solve_speed(op, 1.0);
  double lam = 0.2 * c;
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary_increment(op, 1.0, 1.0 / 128.0, lam));
    lam *= 1.7;
    if (lam > 4.0 * c) lam = 0.2 * c;
  }
}
BENCHMARK(BM_BoundaryIncrement);

void BM_Step(benchmark::State& state) {
  const auto op = OperatorSpec::power_curvature(2.0);
  const int n = static_cast<int>(state.range(0));
  const Grid grid = make_grid(1.0, n);
  const WaveProfile wave = profile(op, 1.0, grid.total());
  FieldState st{grid, wave.ws, 0.0};
  const OperatorBounds lb{wave.c, wave.c};
  const auto mode = BoundaryMode::profile_fixed(wave.c);
  const double dt = cfl_dt(op, st, lb);
  for (auto _ : state) {
    st = step(op, st, dt, mode, lb);
    benchmark::DoNotOptimize(st.u.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Step)->Arg(255)->Arg(511);

}  // namespace

BENCHMARK_MAIN();
