#include <benchmark/benchmark.h>

#include "qe/metric_profile.hpp"
#include "qe/verifier.hpp"

namespace {

/// Rank-1 reference bundle (n=2, q=3, p=1) at m = 2.
qe::BundleSpec reference_spec() {
  qe::BundleSpec spec;
  spec.m = 2.0;
  spec.factors = {{2, 3, 1}};
  return spec;
}

/// Rank-3 bundle blowing down at both ends.
qe::BundleSpec both_blowdown_spec() {
  qe::BundleSpec spec;
  spec.m = 2.0;
  spec.factors = {{1, 2, 1}, {1, 3, 1}, {1, 2, 1}};
  spec.left = qe::EndpointType::Blowdown;
  spec.right = qe::EndpointType::Blowdown;
  return spec;
}

void BM_BoundaryDefect(benchmark::State& state) {
  const auto spec = reference_spec();
  const qe::SolverConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(qe::boundary_defect(8.0, spec, config));
}
BENCHMARK(BM_BoundaryDefect);

void BM_Solve(benchmark::State& state) {
  const auto spec = state.range(0) == 0 ? reference_spec() : both_blowdown_spec();
  for (auto _ : state) benchmark::DoNotOptimize(qe::solve(spec));
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
  const auto profile = qe::solve(reference_spec());
  const auto grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qe::verify(profile, grid));
}
BENCHMARK(BM_Verify)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_ArcLength(benchmark::State& state) {
  const auto profile = qe::solve(reference_spec());
  for (auto _ : state) benchmark::DoNotOptimize(qe::reconstruct_t(profile, 256));
}
BENCHMARK(BM_ArcLength)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
