#pragma once

#include <vector>

#include "specsel/matrix.hpp"

namespace specsel {

// Gaussian linear regression of a proposal variable on a subset of included
// variables, the regression half of the no-grouping model.
struct RegressionFit {
  std::vector<int> subset;   // predictor column positions, possibly empty
  double intercept = 0.0;
  Vector coef;               // length |subset|
  double sigma2 = 0.0;       // ML residual variance (RSS / N*), floored
  double loglik_on_kept = 0.0;
};

struct RegSearchConfig {
  int max_subset = 20;
  double bic_tol = 0.0;  // required BIC improvement per forward step
};

// Least squares on the kept rows; sigma2 = RSS / N* with a relative floor of
// 1e-12 * var(y on kept rows) so exact fits keep finite densities. X holds
// the already-selected predictor columns (may have zero columns).
RegressionFit fit_linear_gaussian(const Vector& y, const Matrix& x, const Mask& kept);

// Per-row log N(y_i; intercept + coef' x_i, sigma2). X must match the fit's
// coefficient count.
std::vector<double> regression_log_density(const RegressionFit& fit, const Vector& y,
                                           const Matrix& x);

// Greedy forward selection over candidate columns scored by
// 2*loglik - (|r|+2)*log(N*), followed by one backward pass. Degenerate
// candidates are skipped. `subset` indexes columns of `candidates`.
RegressionFit select_predictor_subset(const Vector& y, const Matrix& candidates,
                                      const Mask& kept, const RegSearchConfig& config);

// Intercept, coefficients and variance.
long regression_param_count(long subset_size);

}  // namespace specsel
