#include <benchmark/benchmark.h>

#include <numbers>

#include "conespec/asymptotics.hpp"
#include "conespec/oracle.hpp"
#include "conespec/spectrum.hpp"

using namespace conespec;

static void BM_CrossProductEigen(benchmark::State& state) {
  const auto mode = charval::make_mode(3, 0.8);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::cross_product_eigen(mode, 0.2, k));
}
BENCHMARK(BM_CrossProductEigen)->Arg(1)->Arg(10)->Arg(40);

static void BM_SpectrumMerge(benchmark::State& state) {
  const geometry::ConeGeometry g(3, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::spectrum_merge(g, 0.1, 20));
}
BENCHMARK(BM_SpectrumMerge)->Unit(benchmark::kMillisecond);

static void BM_SharpnessReport(benchmark::State& state) {
  const geometry::ConeGeometry g(3, 0.75 * std::numbers::pi);
  for (auto _ : state) benchmark::DoNotOptimize(asymptotics::sharpness_report(g));
}
BENCHMARK(BM_SharpnessReport)->Unit(benchmark::kMillisecond);

static void BM_RadialFd(benchmark::State& state) {
  oracle::FdConfig cfg;
  cfg.radial_nodes = static_cast<int>(state.range(0));
  const geometry::ConeGeometry g(2, 0.75 * std::numbers::pi);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::radial_fd_eigen(g, 2.0 / 3.0, 0.1, 1, cfg));
}
BENCHMARK(BM_RadialFd)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_PolarFd(benchmark::State& state) {
  oracle::FdConfig cfg;
  cfg.radial_nodes = 128;
  cfg.angular_nodes = 64;
  for (auto _ : state) benchmark::DoNotOptimize(oracle::polar_fd_eigen(2.0, 0.1, cfg));
}
BENCHMARK(BM_PolarFd)->Unit(benchmark::kMillisecond);
