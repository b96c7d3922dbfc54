#include <benchmark/benchmark.h>

#include "rqnls/resonance.hpp"

namespace {

using namespace rqnls;

void BM_EnumerateDim1(benchmark::State& state) {
  const auto J = state.range(0);
  for (auto _ : state) {
    auto v = enumerate_resonances(ModeIndex::make1(1), J);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_EnumerateDim1)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_EnumerateDim2(benchmark::State& state) {
  const auto J = state.range(0);
  for (auto _ : state) {
    auto v = enumerate_resonances(ModeIndex::make2(1, 0), J);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_EnumerateDim2)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ElementarySum(benchmark::State& state) {
  const auto K = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(elementary_sum(3, K));
}
BENCHMARK(BM_ElementarySum)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_WeightedSumDim1(benchmark::State& state) {
  const auto K = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(weighted_resonant_sum(ModeIndex::make1(2), K, 0.5));
}
BENCHMARK(BM_WeightedSumDim1)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
