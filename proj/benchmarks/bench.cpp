// Microbenchmarks for the performance-sensitive paths: the normal CDF, the
// closed-form curve with gradients (the optimizer's inner loop), a full
// multi-start fit, stochastic generation, and a forecast envelope.

#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "citedyn/baselines.hpp"
#include "citedyn/fitting.hpp"
#include "citedyn/forecast.hpp"
#include "citedyn/generator.hpp"
#include "citedyn/model.hpp"
#include "citedyn/types.hpp"

namespace {

using namespace citedyn;

const GlobalConstants kGlobals{};
const WsbParams kParams{2.4, 7.2, 1.1};

CitationHistory yearly_history(int n_years) {
  std::vector<double> counts;
  double prev = 0.0;
  for (int k = 1; k <= n_years; ++k) {
    const double c = cumulative_citations(kParams, kGlobals, years_to_days(double(k)));
    counts.push_back(c - prev);
    prev = c;
  }
  return CitationHistory::from_yearly_counts("bench", counts);
}

void BM_Phi(benchmark::State& state) {
  double x = -6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phi(x));
    x += 0.01;
    if (x > 6.0) x = -6.0;
  }
}
BENCHMARK(BM_Phi);

void BM_CumulativeCurve(benchmark::State& state) {
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cumulative_citations(kParams, kGlobals, t));
    t = t < 2e4 ? t + 7.0 : 1.0;
  }
}
BENCHMARK(BM_CumulativeCurve);

void BM_ModelCurveGradient(benchmark::State& state) {
  const std::array<double, 3> theta{kParams.lambda, kParams.mu, kParams.sigma};
  std::array<double, 3> grad{};
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model_curve(ModelKind::wsb, theta, kGlobals, t, &grad));
    benchmark::DoNotOptimize(grad);
    t = t < 2e4 ? t + 7.0 : 1.0;
  }
}
BENCHMARK(BM_ModelCurveGradient);

void BM_FitWsbYearly30(benchmark::State& state) {
  const auto h = yearly_history(30);
  const FitOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_wsb(h, kGlobals, opts));
  }
}
BENCHMARK(BM_FitWsbYearly30)->Unit(benchmark::kMillisecond);

void BM_FitBaselineLogistic(benchmark::State& state) {
  const auto h = yearly_history(30);
  const FitOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_baseline(ModelKind::logistic, h, kGlobals, opts));
  }
}
BENCHMARK(BM_FitBaselineLogistic)->Unit(benchmark::kMillisecond);

void BM_GenerateStochastic(benchmark::State& state) {
  GeneratorSpec spec;
  spec.params = kParams;
  spec.globals = kGlobals;
  spec.horizon_days = years_to_days(30.0);
  spec.mode = GenerationMode::stochastic;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    spec.seed = seed++;
    benchmark::DoNotOptimize(generate(spec));
  }
}
BENCHMARK(BM_GenerateStochastic)->Unit(benchmark::kMicrosecond);

void BM_PredictEnvelope(benchmark::State& state) {
  const auto h = yearly_history(10);
  std::vector<double> grid;
  for (int y = 1; y <= 30; ++y) grid.push_back(years_to_days(double(y)));
  const FitOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(h, kGlobals, grid, ModelKind::wsb, opts));
  }
}
BENCHMARK(BM_PredictEnvelope)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
