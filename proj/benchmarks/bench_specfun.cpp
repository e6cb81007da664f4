#include <benchmark/benchmark.h>

#include "conespec/charval.hpp"
#include "conespec/specfun.hpp"

using namespace conespec;

static void BM_BesselSmallArgument(benchmark::State& state) {
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_jy(2.0 / 3.0, x));
    x = x < 1.9 ? x + 0.01 : 0.3;
  }
}
BENCHMARK(BM_BesselSmallArgument);

static void BM_BesselLargeArgument(benchmark::State& state) {
  double x = 30.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_jy(1.7, x));
    x = x < 80.0 ? x + 0.1 : 30.0;
  }
}
BENCHMARK(BM_BesselLargeArgument);

static void BM_Hyp2f1NearOne(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::hyp2f1(-0.46, 1.46, 1.0, 0.99));
}
BENCHMARK(BM_Hyp2f1NearOne);

static void BM_CharacteristicValue(benchmark::State& state) {
  const geometry::ConeGeometry g(static_cast<int>(state.range(0)), 2.4);
  for (auto _ : state) benchmark::DoNotOptimize(charval::characteristic_value(g));
}
BENCHMARK(BM_CharacteristicValue)->Arg(2)->Arg(3)->Arg(5);
