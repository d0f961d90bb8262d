#include <benchmark/benchmark.h>

#include "fiberld/densities.hpp"
#include "fiberld/fitting.hpp"
#include "fiberld/likelihood.hpp"
#include "fiberld/simulate.hpp"
#include "fiberld/summary.hpp"

using namespace fiberld;

namespace {

const MixtureParams kMix{0.3, Component(GgdParams{0.1, 1.5, 2.0}), Component(GgdParams{2.0, 2.8, 2.2})};
const Component kFibers(GgdParams{2.4, 3.3, 1.5});

Dataset simulate(Scale scale, PopulationParams params, double r, std::size_t n) {
  SimSpec s;
  s.scale = scale;
  s.params = std::move(params);
  s.geom = CoreGeometry(r);
  s.n = n;
  s.seed = 1;
  return Dataset{sample(s), scale};
}

}  // namespace

static void BM_GgdLogTerms(benchmark::State& state) {
  double y = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kFibers.log_terms(y, 2));
    y = y < 4.0 ? y + 1e-3 : 0.5;
  }
}
BENCHMARK(BM_GgdLogTerms);

static void BM_OfaLoglik(benchmark::State& state) {
  const CoreGeometry geom(6.0);
  const Dataset data = simulate(Scale::X, kMix, 6.0, static_cast<std::size_t>(state.range(0)));
  const ParamVector theta = encode(kMix);
  const int order = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ofa_loglik(theta, data, geom, {}, order).loglik);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OfaLoglik)->Args({1000, 0})->Args({1000, 1})->Args({1000, 2})->Args({3000, 2})
    ->Unit(benchmark::kMillisecond);

static void BM_MicroLoglik(benchmark::State& state) {
  const CoreGeometry geom(2.5);
  const Dataset data = simulate(Scale::V, kFibers, 2.5, 300);
  const ParamVector theta = encode(kFibers);
  for (auto _ : state) benchmark::DoNotOptimize(micro_loglik(theta, data, geom).loglik);
}
BENCHMARK(BM_MicroLoglik)->Unit(benchmark::kMicrosecond);

static void BM_WStatistics(benchmark::State& state) {
  const CoreGeometry geom(2.5);
  for (auto _ : state) benchmark::DoNotOptimize(w_statistics(kFibers, geom).value);
}
BENCHMARK(BM_WStatistics)->Unit(benchmark::kMicrosecond);

static void BM_ObservedDensityGrid(benchmark::State& state) {
  const ScaleDensity f(Scale::X, Part::mixture, kMix, CoreGeometry(6.0));
  std::vector<double> grid(200);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 12.0 * (i + 1) / 201.0;
  for (auto _ : state) benchmark::DoNotOptimize(f.evaluate(grid));
}
BENCHMARK(BM_ObservedDensityGrid)->Unit(benchmark::kMicrosecond);

static void BM_SampleX(benchmark::State& state) {
  SimSpec s;
  s.scale = Scale::X;
  s.params = kMix;
  s.geom = CoreGeometry(6.0);
  s.n = 10000;
  for (auto _ : state) benchmark::DoNotOptimize(sample(s));
}
BENCHMARK(BM_SampleX)->Unit(benchmark::kMillisecond);

static void BM_FitMicroscopy(benchmark::State& state) {
  const Dataset data = simulate(Scale::V, kFibers, 2.5, 300);
  const ModelSpec model{Family::ggamma, DataType::microscopy, CoreGeometry(2.5)};
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, model).loglik);
}
BENCHMARK(BM_FitMicroscopy)->Unit(benchmark::kMillisecond);

static void BM_FitOfa(benchmark::State& state) {
  const Dataset data = simulate(Scale::X, kMix, 6.0, 1000);
  const ModelSpec model{Family::ggamma, DataType::ofa, CoreGeometry(6.0)};
  FitConfig cfg;
  cfg.n_starts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, model, cfg).loglik);
}
BENCHMARK(BM_FitOfa)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
