#include <benchmark/benchmark.h>

#include "polyscat/harmonics.hpp"
#include "polyscat/specfun.hpp"

using namespace polyscat;

static void BM_BesselJTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(specfun::sph_bessel_j_table(n, 12.5));
}
BENCHMARK(BM_BesselJTable)->Arg(20)->Arg(60)->Arg(120);

static void BM_RiccatiTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(specfun::riccati_table(n, 3.0));
}
BENCHMARK(BM_RiccatiTable)->Arg(20)->Arg(60);

static void BM_VshAll(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Vec3 d = Vec3(0.3, -0.4, 0.866).normalized();
  for (auto _ : state) benchmark::DoNotOptimize(harmonics::vsh_all(n, d));
}
BENCHMARK(BM_VshAll)->Arg(20)->Arg(40);
