#pragma once

#include <cstdint>
#include <vector>

#include "specsel/family.hpp"
#include "specsel/gaussian.hpp"
#include "specsel/matrix.hpp"

namespace specsel {

struct FitConfig {
  int max_iter = 100;
  int n_restarts = 10;     // all-rows start plus stratified random starts
  double tol = 1e-8;       // secondary stop on log-likelihood change
  std::uint64_t seed = 0;
  int threads = 1;         // restarts run in parallel; result is schedule-independent
  bool record_trace = false;
};

// Result of trimmed maximum-likelihood estimation.
struct TrimmedFit {
  GaussianClassParams params;
  Mask kept;                 // exactly n_star rows set
  double gamma = 0.0;
  double trimmed_loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  long n_star = 0;           // = ceil(N * (1 - gamma))

  // Per-restart per-iteration trimmed log-likelihood, when recorded.
  std::vector<std::vector<double>> restart_traces;
};

struct OutlierReport {
  std::vector<double> log_density;  // marginal mixture log-density per test unit
  std::vector<int> rank;            // ascending; rank 1 = most anomalous
};

struct Prediction {
  std::vector<int> labels;  // MAP class per test unit
  Matrix posterior;         // M x G, rows sum to 1
};

// Kept count N* = ceil(N * (1 - gamma)); gamma in [0, 0.5).
long kept_count(long n_rows, double gamma);

// Entry n = log tau_{g(n)} + log phi(x_n; mu_{g(n)}, Sigma_{g(n)}).
std::vector<double> per_obs_contribution(const GaussianClassParams& params,
                                         const Matrix& data, const std::vector<int>& labels);

// Initial kept sets for the concentration restarts: index 0 keeps every row,
// the rest are class-stratified random subsets of size n_star. Deterministic
// in (seed, restart index).
std::vector<Mask> initial_masks(long n_rows, long n_star, const std::vector<int>& labels,
                                int n_classes, int n_restarts, std::uint64_t seed);

// Warm-start stats for the sweep inner loop: per restart, class stats of all
// but the last data column under initial_masks[r].
struct WarmStart {
  std::vector<ClassStats> base_stats;
};

// Trimmed ML estimation by concentration steps, best restart wins (by
// trimmed log-likelihood, then restart index). With gamma = 0 this is the
// one-step closed-form MLE.
TrimmedFit fit_redda(const Matrix& data, const std::vector<int>& labels, int n_classes,
                     CovarianceFamily family, double gamma, const FitConfig& config,
                     const WarmStart* warm = nullptr);

// MAP rule; ties go to the lowest class index.
Prediction predict_map(const GaussianClassParams& params, const Matrix& test);
Prediction predict_map(const TrimmedFit& fit, const Matrix& test);

// Marginal mixture log-density of each test unit on the fit's variables,
// ranked ascending (rank 1 = lowest density).
OutlierReport marginal_log_density(const GaussianClassParams& params, const Matrix& test);
OutlierReport marginal_log_density(const TrimmedFit& fit, const Matrix& test);

}  // namespace specsel
