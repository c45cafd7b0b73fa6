#pragma once

#include <span>
#include <vector>

#include "specsel/errors.hpp"
#include "specsel/matrix.hpp"

namespace specsel {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
// kept together with its log-determinant so densities never refactor.
struct SpdFactor {
  Matrix lower;    // p x p, strictly positive diagonal
  double log_det;  // = 2 * sum(log(diag(lower)))

  int dim() const { return static_cast<int>(lower.rows()); }
  Matrix reconstruct() const { return lower * lower.transpose(); }
};

// Factors (m + m') / 2. Throws NotPositiveDefinite when a pivot falls at or
// below `pivot_floor`.
SpdFactor cholesky_spd(const Matrix& m, double pivot_floor = 0.0);

// cholesky_spd with one scale-relative ridge retry: on failure retries with
// m + (1e-8 * trace(m) / p) * I, then rethrows.
SpdFactor factor_with_ridge(const Matrix& m);

// log N(x; mu, sigma) through a triangular solve; sigma is never inverted.
double log_mvn_density(const Vector& x, const Vector& mu, const SpdFactor& sigma);

// log sum_i exp(v_i) with the max subtracted. Empty input is a logic error;
// all -inf input yields -inf.
double log_sum_exp(std::span<const double> values);

// Per-class counts, means and centered cross-product ("scatter") matrices of
// the kept rows, plus their pooled sum.
struct ClassStats {
  std::vector<long> counts;       // kept rows per class
  std::vector<Vector> means;
  std::vector<Matrix> scatters;   // sum over kept rows of (x - mean)(x - mean)'
  Matrix pooled;                  // elementwise sum of scatters

  int classes() const { return static_cast<int>(counts.size()); }
  int dim() const { return static_cast<int>(pooled.rows()); }
  long total() const;
};

// One-pass (Welford/Chan) accumulation over the kept rows, in ascending row
// order. Throws ClassCollapsed when any class keeps fewer than 2 rows.
ClassStats class_sufficient_stats(const Matrix& data, const std::vector<int>& labels,
                                  int n_classes, const Mask& kept);

// Extends stats computed on the first (p-1) columns of `data` with its last
// column, replaying the same accumulation arithmetic so the result is
// bit-identical to class_sufficient_stats on all p columns.
ClassStats augment_stats(const ClassStats& base, const Matrix& data,
                         const std::vector<int>& labels, const Mask& kept);

}  // namespace specsel
