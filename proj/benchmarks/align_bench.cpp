#include <benchmark/benchmark.h>

#include <random>

#include "rootflow/align.hpp"
#include "rootflow/continuity.hpp"

namespace {

using rootflow::Complex;

std::vector<Complex> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v(static_cast<std::size_t>(n));
  for (auto& z : v) z = {u(rng), u(rng)};
  return v;
}

void BM_Bottleneck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_points(n, 1), b = random_points(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rootflow::align_bottleneck(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Bottleneck)->RangeMultiplier(2)->Range(2, 64)->Complexity();

void BM_AlignByDeflation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto roots = random_points(n, 3);
  const auto f = rootflow::from_roots(roots);
  for (auto& r : roots) r += 1e-6;
  const auto g = rootflow::from_roots(roots);
  for (auto _ : state) benchmark::DoNotOptimize(rootflow::align_by_deflation(f, g));
}
BENCHMARK(BM_AlignByDeflation)->Arg(2)->Arg(4)->Arg(8);

void BM_WorstDistance(benchmark::State& state) {
  const auto f = rootflow::from_roots(random_points(static_cast<int>(state.range(0)), 4));
  rootflow::SamplerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rootflow::worst_distance(f, 1e-6, cfg));
}
BENCHMARK(BM_WorstDistance)->Arg(2)->Arg(4)->Arg(8);

}  // namespace
