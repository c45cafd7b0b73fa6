#include "specsel/redda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "specsel/concentration.hpp"
#include "specsel/errors.hpp"
#include "specsel/parallel.hpp"
#include "specsel/rng.hpp"

namespace specsel {

long kept_count(long n_rows, double gamma) {
  if (!(gamma >= 0.0 && gamma < 0.5)) {
    throw Infeasible("gamma must lie in [0, 0.5)");
  }
  return static_cast<long>(std::ceil(static_cast<double>(n_rows) * (1.0 - gamma)));
}

std::vector<double> per_obs_contribution(const GaussianClassParams& params,
                                         const Matrix& data, const std::vector<int>& labels) {
  const long n = data.rows();
  if (labels.size() != static_cast<std::size_t>(n) || data.cols() != params.dim()) {
    throw DimensionMismatch("per_obs_contribution: shape mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  std::vector<double> log_tau(params.tau.size());
  for (std::size_t g = 0; g < params.tau.size(); ++g) log_tau[g] = std::log(params.tau[g]);
  for (long i = 0; i < n; ++i) {
    const int g = labels[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] =
        log_tau[static_cast<std::size_t>(g)] +
        log_mvn_density(data.row(i).transpose(), params.mu[static_cast<std::size_t>(g)],
                        params.chol[static_cast<std::size_t>(g)]);
  }
  return out;
}

std::vector<Mask> initial_masks(long n_rows, long n_star, const std::vector<int>& labels,
                                int n_classes, int n_restarts, std::uint64_t seed) {
  std::vector<Mask> masks;
  masks.reserve(static_cast<std::size_t>(n_restarts));
  masks.emplace_back(static_cast<std::size_t>(n_rows), 1);  // all-rows start

  if (n_restarts <= 1) return masks;

  // Class row lists and stratified quotas (largest remainder, floor >= 2).
  std::vector<std::vector<int>> rows_by_class(static_cast<std::size_t>(n_classes));
  for (long i = 0; i < n_rows; ++i) {
    rows_by_class[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(
        static_cast<int>(i));
  }
  std::vector<long> quota(static_cast<std::size_t>(n_classes), 0);
  std::vector<double> frac(static_cast<std::size_t>(n_classes), 0.0);
  long assigned = 0;
  for (int g = 0; g < n_classes; ++g) {
    const double ideal = static_cast<double>(rows_by_class[static_cast<std::size_t>(g)].size()) *
                         static_cast<double>(n_star) / static_cast<double>(n_rows);
    quota[static_cast<std::size_t>(g)] = static_cast<long>(std::floor(ideal));
    frac[static_cast<std::size_t>(g)] = ideal - std::floor(ideal);
    assigned += quota[static_cast<std::size_t>(g)];
  }
  while (assigned < n_star) {  // hand out remainders, largest fraction first
    int best = 0;
    for (int g = 1; g < n_classes; ++g) {
      if (frac[static_cast<std::size_t>(g)] > frac[static_cast<std::size_t>(best)]) best = g;
    }
    quota[static_cast<std::size_t>(best)] += 1;
    frac[static_cast<std::size_t>(best)] = -1.0;
    ++assigned;
  }
  // Keep every class estimable in the start set.
  for (int g = 0; g < n_classes; ++g) {
    const long have = static_cast<long>(rows_by_class[static_cast<std::size_t>(g)].size());
    if (have < 2) throw ClassCollapsed("class " + std::to_string(g) + " has fewer than 2 rows");
    if (quota[static_cast<std::size_t>(g)] < 2) quota[static_cast<std::size_t>(g)] = 2;
    if (quota[static_cast<std::size_t>(g)] > have) quota[static_cast<std::size_t>(g)] = have;
  }
  long total = std::accumulate(quota.begin(), quota.end(), 0L);
  while (total > n_star) {  // trim the largest quota back down
    int big = 0;
    for (int g = 1; g < n_classes; ++g) {
      if (quota[static_cast<std::size_t>(g)] > quota[static_cast<std::size_t>(big)]) big = g;
    }
    if (quota[static_cast<std::size_t>(big)] <= 2) break;
    quota[static_cast<std::size_t>(big)] -= 1;
    --total;
  }
  if (total != n_star) {
    throw Infeasible("stratified start infeasible: n_star too small for " +
                     std::to_string(n_classes) + " classes");
  }

  for (int r = 1; r < n_restarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    Mask mask(static_cast<std::size_t>(n_rows), 0);
    for (int g = 0; g < n_classes; ++g) {
      std::vector<int> rows = rows_by_class[static_cast<std::size_t>(g)];
      // partial Fisher-Yates: the first quota[g] entries are the sample
      for (long k = 0; k < quota[static_cast<std::size_t>(g)]; ++k) {
        const std::size_t j = static_cast<std::size_t>(k) +
                              static_cast<std::size_t>(rng.below(rows.size() - static_cast<std::size_t>(k)));
        std::swap(rows[static_cast<std::size_t>(k)], rows[j]);
        mask[static_cast<std::size_t>(rows[static_cast<std::size_t>(k)])] = 1;
      }
    }
    masks.push_back(std::move(mask));
  }
  return masks;
}

namespace {

struct RestartOutcome {
  Concentration<GaussianClassParams> run;
  bool collapsed = false;
  std::string error;
};

}  // namespace

TrimmedFit fit_redda(const Matrix& data, const std::vector<int>& labels, int n_classes,
                     CovarianceFamily family, double gamma, const FitConfig& config,
                     const WarmStart* warm) {
  const long n = data.rows();
  const int p = static_cast<int>(data.cols());
  const long n_star = kept_count(n, gamma);
  if (n_star < static_cast<long>(n_classes) * (p + 1)) {
    throw Infeasible("fit_redda: n_star = " + std::to_string(n_star) +
                     " below G*(p+1) = " + std::to_string(n_classes * (p + 1)));
  }

  // When nothing is trimmed the concentration loop converges on the first
  // iteration, so extra restarts would only repeat the same fit.
  const int n_restarts = (n_star == n) ? 1 : std::max(1, config.n_restarts);
  const std::vector<Mask> starts =
      initial_masks(n, n_star, labels, n_classes, n_restarts, config.seed);

  std::vector<RestartOutcome> outcomes(starts.size());
  parallel_for(starts.size(), config.threads, [&](std::size_t r) {
    auto fit_on = [&](const Mask& mask) -> GaussianClassParams {
      ClassStats stats;
      if (warm != nullptr && r < warm->base_stats.size() && mask == starts[r]) {
        stats = augment_stats(warm->base_stats[r], data, labels, mask);
      } else {
        stats = class_sufficient_stats(data, labels, n_classes, mask);
      }
      return make_class_params(stats, family, mask_count(mask));
    };
    auto contrib_of = [&](const GaussianClassParams& params) {
      return per_obs_contribution(params, data, labels);
    };
    try {
      outcomes[r].run = concentrate(n, n_star, starts[r], config.max_iter, config.tol,
                                    config.record_trace, fit_on, contrib_of);
    } catch (const Error& e) {
      outcomes[r].collapsed = true;
      outcomes[r].error = e.what();
    }
  });

  int best = -1;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].collapsed) continue;
    if (best < 0 || outcomes[r].run.loglik > outcomes[static_cast<std::size_t>(best)].run.loglik) {
      best = static_cast<int>(r);
    }
  }
  if (best < 0) {
    throw ClassCollapsed("fit_redda: every restart collapsed a class (last: " +
                         outcomes.back().error + ")");
  }

  auto& run = outcomes[static_cast<std::size_t>(best)].run;
  TrimmedFit fit;
  fit.params = std::move(run.model);
  fit.kept = std::move(run.kept);
  fit.gamma = gamma;
  fit.trimmed_loglik = run.loglik;
  fit.iterations = run.iterations;
  fit.converged = run.converged;
  fit.n_star = n_star;
  if (config.record_trace) {
    for (auto& o : outcomes) {
      if (!o.collapsed) fit.restart_traces.push_back(std::move(o.run.trace));
    }
  }
  return fit;
}

Prediction predict_map(const GaussianClassParams& params, const Matrix& test) {
  const long m = test.rows();
  const int g_total = params.classes();
  if (test.cols() != params.dim()) {
    throw DimensionMismatch("predict_map: test has " + std::to_string(test.cols()) +
                            " columns, model expects " + std::to_string(params.dim()));
  }
  Prediction out;
  out.labels.resize(static_cast<std::size_t>(m));
  out.posterior.resize(m, g_total);

  std::vector<double> joint(static_cast<std::size_t>(g_total));
  for (long i = 0; i < m; ++i) {
    for (int g = 0; g < g_total; ++g) {
      joint[static_cast<std::size_t>(g)] =
          std::log(params.tau[static_cast<std::size_t>(g)]) +
          log_mvn_density(test.row(i).transpose(), params.mu[static_cast<std::size_t>(g)],
                          params.chol[static_cast<std::size_t>(g)]);
    }
    const double denom = log_sum_exp(joint);
    int arg = 0;
    for (int g = 0; g < g_total; ++g) {
      out.posterior(i, g) = std::exp(joint[static_cast<std::size_t>(g)] - denom);
      if (joint[static_cast<std::size_t>(g)] > joint[static_cast<std::size_t>(arg)]) arg = g;
    }
    out.labels[static_cast<std::size_t>(i)] = arg;
  }
  return out;
}

Prediction predict_map(const TrimmedFit& fit, const Matrix& test) {
  return predict_map(fit.params, test);
}

OutlierReport marginal_log_density(const GaussianClassParams& params, const Matrix& test) {
  const long m = test.rows();
  const int g_total = params.classes();
  if (test.cols() != params.dim()) {
    throw DimensionMismatch("marginal_log_density: test has " + std::to_string(test.cols()) +
                            " columns, model expects " + std::to_string(params.dim()));
  }
  OutlierReport report;
  report.log_density.resize(static_cast<std::size_t>(m));
  std::vector<double> joint(static_cast<std::size_t>(g_total));
  for (long i = 0; i < m; ++i) {
    for (int g = 0; g < g_total; ++g) {
      joint[static_cast<std::size_t>(g)] =
          std::log(params.tau[static_cast<std::size_t>(g)]) +
          log_mvn_density(test.row(i).transpose(), params.mu[static_cast<std::size_t>(g)],
                          params.chol[static_cast<std::size_t>(g)]);
    }
    report.log_density[static_cast<std::size_t>(i)] = log_sum_exp(joint);
  }

  // rank 1 = smallest density; ties by row order
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return report.log_density[static_cast<std::size_t>(a)] <
           report.log_density[static_cast<std::size_t>(b)];
  });
  report.rank.resize(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    report.rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        static_cast<int>(i) + 1;
  }
  return report;
}

OutlierReport marginal_log_density(const TrimmedFit& fit, const Matrix& test) {
  return marginal_log_density(fit.params, test);
}

}  // namespace specsel
