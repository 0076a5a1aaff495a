// Serial reference vs OpenMP driver for the certificate scans.
// Arg 0 selects the driver: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "sforge/certify.hpp"

using namespace sforge;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

MixedPoly l6a1() {
  const GradedBraidPoly g = expand_g(square_parametrisation(lemniscate(4, 3, 1)));
  return build_polynomial(g, ConstructionMeta{1.0, 1.0, 1, 0.0, 0.0, 0.5});
}

void BM_ArgCrit(benchmark::State& state) {
  const BraidParam b = lemniscate(5, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(arg_crit_scan(b, 1.0, 0.25, 2048, exec_of(state)).margin);
}

void BM_Isolation(benchmark::State& state) {
  const MixedPoly p = l6a1();
  for (auto _ : state) benchmark::DoNotOptimize(isolation_check(p, 32, 256, exec_of(state)).margin);
}

void BM_SphereLink(benchmark::State& state) {
  const BraidParam b = square_parametrisation(lemniscate(4, 3, 1));
  const MixedPoly p = l6a1();
  for (auto _ : state)
    benchmark::DoNotOptimize(sphere_link_check(p, b, {0.25, 0.5, 1.0}, {}, exec_of(state)).margin);
}

void BM_DRegular(benchmark::State& state) {
  const MixedPoly p = l6a1();
  for (auto _ : state)
    benchmark::DoNotOptimize(d_regularity_check(p, {0.5, 1.0}, 64, 10000, exec_of(state)).margin);
}

} // namespace

BENCHMARK(BM_ArgCrit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Isolation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SphereLink)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DRegular)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
