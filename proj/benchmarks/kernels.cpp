#include <benchmark/benchmark.h>

#include "ilw/dynamics.hpp"
#include "ilw/evaluate.hpp"
#include "ilw/hierarchy.hpp"
#include "ilw/measures.hpp"
#include "ilw/spectral.hpp"

namespace {

using namespace ilw;

const GaussianSpec kSpec{sym::Regime::Deep, 3, 2.0};

void BM_SpectralMultiply(benchmark::State& state) {
  const long n = state.range(0);
  const SpectralField f = sample(kSpec, n, 1, 0), g = sample(kSpec, n, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(multiply_full(f, g));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SpectralMultiply)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_DirectConvolution(benchmark::State& state) {
  const long n = state.range(0);
  const auto f = FullSpectrum::from_field(sample(kSpec, n, 1, 0)), g = FullSpectrum::from_field(sample(kSpec, n, 1, 1));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_direct(f, g));
}
BENCHMARK(BM_DirectConvolution)->RangeMultiplier(4)->Range(16, 256);

void BM_CanonicalEnergy(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sym::energy_deep(k));
}
BENCHMARK(BM_CanonicalEnergy)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_EvaluateEnergy(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const sym::CompiledDensity energy(sym::energy_deep(k));
  const SpectralField u = sample(kSpec, 64, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(energy.evaluate(u, {2.0}));
}
BENCHMARK(BM_EvaluateEnergy)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_IntegratorSteps(benchmark::State& state) {
  const long m = state.range(0);
  const EvolutionSpec spec{Dispersion::ILW, 2.0, std::nullopt, m, true};
  const SpectralField u = sample(kSpec, m, 1, 0);
  constexpr double dt = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(flow(spec, u, 10 * dt, dt));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_IntegratorSteps)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMicrosecond);

void BM_Sample(benchmark::State& state) {
  const long n = state.range(0);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample(kSpec, n, 1, i++));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Sample)->RangeMultiplier(8)->Range(64, 32768);

void BM_KakutaniSums(benchmark::State& state) {
  const GaussianSpec a{sym::Regime::Shallow, 3, 0.5}, b{sym::Regime::Shallow, 3, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(kakutani_partial_sums(a, b, state.range(0)));
}
BENCHMARK(BM_KakutaniSums)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
