#include "specsel/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specsel/errors.hpp"

namespace specsel {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kTinyVariance = 1e-300;  // keeps log densities finite for constant y

double gaussian_loglik(double rss, long n, double sigma2) {
  return -0.5 * static_cast<double>(n) * (kLog2Pi + std::log(sigma2)) - rss / (2.0 * sigma2);
}

}  // namespace

long regression_param_count(long subset_size) { return subset_size + 2; }

RegressionFit fit_linear_gaussian(const Vector& y, const Matrix& x, const Mask& kept) {
  const long n = y.size();
  if (x.rows() != 0 && x.rows() != n) {
    throw DimensionMismatch("fit_linear_gaussian: predictor row count mismatch");
  }
  if (kept.size() != static_cast<std::size_t>(n)) {
    throw DimensionMismatch("fit_linear_gaussian: mask length mismatch");
  }
  const int q = static_cast<int>(x.cols());
  const long n_star = mask_count(kept);
  if (n_star <= q + 1) {
    throw Infeasible("fit_linear_gaussian: kept rows must exceed predictors + 1");
  }

  Vector yk(n_star);
  Matrix design(n_star, q + 1);
  long row = 0;
  for (long i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) continue;
    yk(row) = y(i);
    design(row, 0) = 1.0;
    for (int j = 0; j < q; ++j) design(row, j + 1) = x(i, j);
    ++row;
  }

  Vector beta;
  if (q == 0) {
    beta = Vector::Constant(1, yk.mean());
  } else {
    Eigen::ColPivHouseholderQR<Matrix> qr(design);
    if (qr.rank() == q + 1) {
      beta = qr.solve(yk);
    } else {
      // normal equations with a small ridge as the last resort
      Matrix ata = design.transpose() * design;
      ata.diagonal().array() += 1e-10;
      Eigen::LDLT<Matrix> ldlt(ata);
      beta = ldlt.solve(design.transpose() * yk);
      if (ldlt.info() != Eigen::Success || !beta.allFinite()) {
        throw RankDeficient("fit_linear_gaussian: kept design is singular");
      }
    }
  }

  const Vector residual = yk - design * beta;
  const double rss = residual.squaredNorm();
  const double y_mean = yk.mean();
  const double y_var = (yk.array() - y_mean).square().sum() / static_cast<double>(n_star);

  RegressionFit fit;
  fit.subset.resize(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) fit.subset[static_cast<std::size_t>(j)] = j;
  fit.intercept = beta(0);
  fit.coef = beta.tail(q);
  fit.sigma2 = std::max({rss / static_cast<double>(n_star), 1e-12 * y_var, kTinyVariance});
  fit.loglik_on_kept = gaussian_loglik(rss, n_star, fit.sigma2);
  return fit;
}

std::vector<double> regression_log_density(const RegressionFit& fit, const Vector& y,
                                           const Matrix& x) {
  const long n = y.size();
  if (fit.coef.size() != x.cols() || (x.cols() > 0 && x.rows() != n)) {
    throw DimensionMismatch("regression_log_density: shape mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  const double log_norm = -0.5 * (kLog2Pi + std::log(fit.sigma2));
  for (long i = 0; i < n; ++i) {
    double mean = fit.intercept;
    for (int j = 0; j < x.cols(); ++j) mean += fit.coef(j) * x(i, j);
    const double r = y(i) - mean;
    out[static_cast<std::size_t>(i)] = log_norm - r * r / (2.0 * fit.sigma2);
  }
  return out;
}

namespace {

Matrix project_columns(const Matrix& from, const std::vector<int>& cols) {
  Matrix out(from.rows(), static_cast<long>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<long>(j)) = from.col(cols[j]);
  }
  return out;
}

double regression_bic(const RegressionFit& fit, long n_star) {
  return 2.0 * fit.loglik_on_kept -
         static_cast<double>(regression_param_count(static_cast<long>(fit.subset.size()))) *
             std::log(static_cast<double>(n_star));
}

}  // namespace

RegressionFit select_predictor_subset(const Vector& y, const Matrix& candidates,
                                      const Mask& kept, const RegSearchConfig& config) {
  const long n_star = mask_count(kept);
  const int k = static_cast<int>(candidates.cols());
  const int cap = std::min(k, config.max_subset);

  // Degenerate candidates (constant on the kept rows) are never eligible.
  std::vector<bool> usable(static_cast<std::size_t>(k), false);
  for (int j = 0; j < k; ++j) {
    double mean = 0.0;
    long m = 0;
    for (long i = 0; i < y.size(); ++i) {
      if (kept[static_cast<std::size_t>(i)]) mean += candidates(i, j), ++m;
    }
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (long i = 0; i < y.size(); ++i) {
      if (kept[static_cast<std::size_t>(i)]) {
        const double d = candidates(i, j) - mean;
        ss += d * d;
      }
    }
    usable[static_cast<std::size_t>(j)] = ss > 0.0 && std::isfinite(ss);
  }

  RegressionFit current = fit_linear_gaussian(y, Matrix(y.size(), 0), kept);
  current.subset.clear();
  double current_bic = regression_bic(current, n_star);
  std::vector<int> included;

  // forward
  while (static_cast<int>(included.size()) < cap) {
    int best = -1;
    double best_bic = current_bic;
    RegressionFit best_fit;
    for (int j = 0; j < k; ++j) {
      if (!usable[static_cast<std::size_t>(j)]) continue;
      if (std::find(included.begin(), included.end(), j) != included.end()) continue;
      std::vector<int> trial = included;
      trial.push_back(j);
      if (n_star <= static_cast<long>(trial.size()) + 1) continue;
      try {
        RegressionFit fit = fit_linear_gaussian(y, project_columns(candidates, trial), kept);
        const double bic = regression_bic(fit, n_star);
        if (bic > best_bic + config.bic_tol) {
          best = j;
          best_bic = bic;
          best_fit = std::move(fit);
          best_fit.subset = trial;
        }
      } catch (const Error&) {
        // collinear with the current subset; skip
      }
    }
    if (best < 0) break;
    included.push_back(best);
    best_fit.subset = included;
    current = std::move(best_fit);
    current_bic = regression_bic(current, n_star);
  }

  // one backward pass, in inclusion order
  for (std::size_t drop = 0; drop < included.size();) {
    std::vector<int> trial = included;
    trial.erase(trial.begin() + static_cast<long>(drop));
    try {
      RegressionFit fit = fit_linear_gaussian(y, project_columns(candidates, trial), kept);
      fit.subset = trial;
      const double bic = regression_bic(fit, n_star);
      if (bic > current_bic + config.bic_tol) {
        included = trial;
        current = std::move(fit);
        current_bic = bic;
        continue;  // same position now holds the next variable
      }
    } catch (const Error&) {
    }
    ++drop;
  }

  current.subset = included;
  return current;
}

}  // namespace specsel
