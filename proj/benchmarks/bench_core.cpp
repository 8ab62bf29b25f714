#include <benchmark/benchmark.h>

#include <vector>

#include "qrem/disorder.hpp"
#include "qrem/geometry.hpp"
#include "qrem/hypercube.hpp"
#include "qrem/operators.hpp"
#include "qrem/pressure.hpp"

using namespace qrem;

namespace {

void BM_SampleFullPSpin(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample(DisorderVariant::full(3), n, seed++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cube_size(n)));
}
BENCHMARK(BM_SampleFullPSpin)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

void BM_SampleRem(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample(DisorderVariant::rem(), n, seed++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cube_size(n)));
}
BENCHMARK(BM_SampleRem)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

void BM_Apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto real = sample(DisorderVariant::rem(), n, 7);
  const HamiltonianSpec spec(real, 1.0);
  std::vector<double> v(cube_size(n), 1.0), out(cube_size(n));
  for (auto _ : state) {
    apply_into(spec, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cube_size(n)));
}
BENCHMARK(BM_Apply)->DenseRange(12, 22, 5)->Unit(benchmark::kMicrosecond);

void BM_DensePressure(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto real = sample(DisorderVariant::rem(), n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(quantum_pressure_dense(HamiltonianSpec(real, 1.0), 1.0));
}
BENCHMARK(BM_DensePressure)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_StochasticPressure(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto real = sample(DisorderVariant::rem(), n, 3);
  const HamiltonianSpec spec(real, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantum_pressure_stochastic(spec, 1.0, 16, 40, 5));
  }
}
BENCHMARK(BM_StochasticPressure)->DenseRange(10, 16, 3)->Unit(benchmark::kMillisecond);

void BM_BallOperatorNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto b = ball(SpinConfiguration::all_down(n), n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(b));
}
BENCHMARK(BM_BallOperatorNorm)->DenseRange(10, 16, 2)->Unit(benchmark::kMillisecond);

void BM_ConnectedComponents(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto real = sample(DisorderVariant::full(2), n, 11);
  const auto region = augment(deep_holes(real, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(region, 0.25));
  state.counters["region"] = static_cast<double>(region.count());
}
BENCHMARK(BM_ConnectedComponents)->DenseRange(10, 14, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
