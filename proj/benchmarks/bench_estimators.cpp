#include <benchmark/benchmark.h>

#include <entsa/deriv.hpp>
#include <entsa/entropy_sa.hpp>
#include <entsa/testsuite.hpp>
#include <entsa/variance_sa.hpp>

using namespace entsa;

namespace {

std::vector<double> uniform_sample(std::size_t n) {
  RngStream rng(1);
  std::vector<double> s(n);
  for (auto& x : s) x = rng.uniform();
  return s;
}

void BM_EntropyHistogram(benchmark::State& state) {
  const auto s = uniform_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(entropy_histogram(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EntropyHistogram)->Arg(10'000)->Arg(1'000'000);

void BM_ConditionalEntropyGrid(benchmark::State& state) {
  const auto b = draw_batch(builtin("ishigami").model, static_cast<std::size_t>(state.range(0)), RngStream(2));
  const auto x = b.inputs.without_column(0);
  for (auto _ : state) benchmark::DoNotOptimize(conditional_entropy(b.outputs, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ConditionalEntropyGrid)->Arg(100'000)->Arg(1'000'000);

void BM_EntropyIndicesIshigami(benchmark::State& state) {
  const auto m = builtin("ishigami").model;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_entropy_indices(m, static_cast<std::size_t>(state.range(0)), {}, 1, RngStream(3)));
}
BENCHMARK(BM_EntropyIndicesIshigami)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_EntropyIndicesNested(benchmark::State& state) {
  const auto m = builtin("mono5").model;
  HistogramSpec spec;
  spec.scheme = ConditioningScheme::nested;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_entropy_indices(m, static_cast<std::size_t>(state.range(0)), spec, 1, RngStream(4)));
}
BENCHMARK(BM_EntropyIndicesNested)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_DerivMeasuresFlood(benchmark::State& state) {
  const auto m = builtin("flood").model;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_deriv_measures(m, static_cast<std::size_t>(state.range(0)), 1e-5, RngStream(5)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DerivMeasuresFlood)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_JansenFlood(benchmark::State& state) {
  const auto m = builtin("flood").model;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_total_effect_variance(m, static_cast<std::size_t>(state.range(0)), RngStream(6)));
}
BENCHMARK(BM_JansenFlood)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_KLRatio(benchmark::State& state) {
  const auto m = builtin("ratio_chi2").model;
  for (auto _ : state)
    benchmark::DoNotOptimize(kl_total_index(m, 0, static_cast<std::size_t>(state.range(0)), {}, RngStream(7)));
}
BENCHMARK(BM_KLRatio)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
