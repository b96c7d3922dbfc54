#include <benchmark/benchmark.h>

#include "rqnls/fields.hpp"
#include "rqnls/nonlinearity.hpp"

namespace {

using namespace rqnls;

void BM_EvalFDirect(benchmark::State& state) {
  const auto J = state.range(0);
  const Grid1D g(10.0, 64);
  const auto u = random_field(1, J, g, 7);
  const auto& table = shared_table(1, J);
  for (auto _ : state) {
    auto F = eval_F_direct(u, table);
    benchmark::DoNotOptimize(F.values().data());
  }
  state.SetLabel("tuples=" + std::to_string(table.total_tuples()));
}
BENCHMARK(BM_EvalFDirect)->DenseRange(1, 8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_EvalFFft(benchmark::State& state) {
  const auto J = state.range(0);
  const Grid1D g(10.0, 64);
  const auto u = random_field(1, J, g, 7);
  (void)eval_F_fft(u);  // warm plans
  for (auto _ : state) {
    auto F = eval_F_fft(u);
    benchmark::DoNotOptimize(F.values().data());
  }
}
BENCHMARK(BM_EvalFFft)->DenseRange(1, 8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SexticDensity(benchmark::State& state) {
  const Grid1D g(10.0, 64);
  const auto u = random_field(1, state.range(0), g, 7);
  (void)sextic_density(u);
  for (auto _ : state) {
    auto D = sextic_density(u);
    benchmark::DoNotOptimize(D.data());
  }
}
BENCHMARK(BM_SexticDensity)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
