#include <benchmark/benchmark.h>

#include <vector>

#include "specsel/gaussian.hpp"
#include "specsel/redda.hpp"
#include "specsel/rng.hpp"
#include "specsel/stepwise.hpp"

using namespace specsel;

namespace {

// Class-separated Gaussian rows: labels cycle, unit noise, spread means.
struct Bench {
  Matrix data;
  std::vector<int> labels;
  int n_classes;
};

Bench make_bench(long n, int p, int g, double separation) {
  Rng rng(42);
  Bench b;
  b.n_classes = g;
  b.data.resize(n, p);
  b.labels.resize(static_cast<std::size_t>(n));
  Matrix means(g, p);
  for (int c = 0; c < g; ++c) {
    for (int j = 0; j < p; ++j) means(c, j) = separation * rng.normal();
  }
  for (long i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % g);
    b.labels[static_cast<std::size_t>(i)] = c;
    for (int j = 0; j < p; ++j) b.data(i, j) = means(c, j) + rng.normal();
  }
  return b;
}

void bm_density_batch(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const Bench b = make_bench(1000, p, 1, 0.0);
  const Mask all(1000, 1);
  const ClassStats stats = class_sufficient_stats(b.data, b.labels, 1, all);
  const GaussianClassParams params = make_class_params(stats, CovarianceFamily::VVV, 1000);
  for (auto _ : state) {
    double sum = 0.0;
    for (long i = 0; i < b.data.rows(); ++i) {
      sum += log_mvn_density(b.data.row(i).transpose(), params.mu[0], params.chol[0]);
    }
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * b.data.rows());
}
BENCHMARK(bm_density_batch)->Arg(5)->Arg(20)->Arg(50);

void bm_class_stats(benchmark::State& state) {
  const Bench b = make_bench(state.range(0), 20, 3, 2.0);
  const Mask all(static_cast<std::size_t>(b.data.rows()), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(class_sufficient_stats(b.data, b.labels, 3, all));
  }
  state.SetItemsProcessed(state.iterations() * b.data.rows());
}
BENCHMARK(bm_class_stats)->Arg(300)->Arg(3000);

void bm_fit_trimmed(benchmark::State& state) {
  const Bench b = make_bench(300, static_cast<int>(state.range(0)), 3, 2.0);
  FitConfig config;
  config.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fit_redda(b.data, b.labels, 3, CovarianceFamily::VVI, 0.1, config));
  }
}
BENCHMARK(bm_fit_trimmed)->Arg(2)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void bm_sweep_warm(benchmark::State& state) {
  const Bench b = make_bench(300, 30, 3, 2.5);
  StepwiseConfig config;
  config.family = CovarianceFamily::VVI;
  config.gamma = 0.1;
  config.fit.seed = 7;
  const std::vector<int> included{3, 11, 19};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sweep(b.data, b.labels, 3, included, StepDirection::Add, config));
  }
  state.SetItemsProcessed(state.iterations() * (30 - 3));
}
BENCHMARK(bm_sweep_warm)->Unit(benchmark::kMillisecond);

void bm_candidate_cold(benchmark::State& state) {
  const Bench b = make_bench(300, 30, 3, 2.5);
  StepwiseConfig config;
  config.family = CovarianceFamily::VVI;
  config.gamma = 0.1;
  config.fit.seed = 7;
  const std::vector<int> included{3, 11, 19};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evaluate_candidate(b.data, b.labels, 3, included, StepDirection::Add, 7, config));
  }
}
BENCHMARK(bm_candidate_cold)->Unit(benchmark::kMillisecond);

void bm_predict(benchmark::State& state) {
  const Bench b = make_bench(300, 6, 3, 2.0);
  FitConfig config;
  config.seed = 7;
  const TrimmedFit fit = fit_redda(b.data, b.labels, 3, CovarianceFamily::VVI, 0.05, config);
  const Bench probe = make_bench(1000, 6, 3, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_map(fit.params, probe.data));
  }
  state.SetItemsProcessed(state.iterations() * probe.data.rows());
}
BENCHMARK(bm_predict);

}  // namespace

BENCHMARK_MAIN();
