#include "specsel/gaussian.hpp"

#include <cmath>
#include <limits>

namespace specsel {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

SpdFactor cholesky_spd(const Matrix& m, double pivot_floor) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch("cholesky_spd: matrix must be square and non-empty");
  }
  const int p = static_cast<int>(m.rows());
  Matrix a = 0.5 * (m + m.transpose());

  Matrix lower = Matrix::Zero(p, p);
  double log_det = 0.0;
  for (int j = 0; j < p; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
    if (!(pivot > pivot_floor)) {  // also rejects NaN
      throw NotPositiveDefinite("cholesky_spd: pivot " + std::to_string(pivot) +
                                " at index " + std::to_string(j));
    }
    const double ljj = std::sqrt(pivot);
    lower(j, j) = ljj;
    log_det += 2.0 * std::log(ljj);
    for (int i = j + 1; i < p; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / ljj;
    }
  }
  return SpdFactor{std::move(lower), log_det};
}

SpdFactor factor_with_ridge(const Matrix& m) {
  try {
    return cholesky_spd(m);
  } catch (const NotPositiveDefinite&) {
    const double p = static_cast<double>(m.rows());
    const double ridge = 1e-8 * m.trace() / p;
    Matrix fixed = m;
    fixed.diagonal().array() += ridge;
    return cholesky_spd(fixed);  // second failure propagates
  }
}

double log_mvn_density(const Vector& x, const Vector& mu, const SpdFactor& sigma) {
  if (x.size() != mu.size() || x.size() != sigma.dim()) {
    throw DimensionMismatch("log_mvn_density: dimension mismatch");
  }
  const Vector z = sigma.lower.triangularView<Eigen::Lower>().solve(x - mu);
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + sigma.log_det + z.squaredNorm());
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw DimensionMismatch("log_sum_exp: empty input");
  }
  double max = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (v > max) max = v;
  }
  if (max == -std::numeric_limits<double>::infinity()) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

long ClassStats::total() const {
  long n = 0;
  for (long c : counts) n += c;
  return n;
}

namespace {

// Shared finalization: symmetrize scatters and pool them.
ClassStats finalize_stats(std::vector<long> counts, std::vector<Vector> means,
                          std::vector<Matrix> raw, int p) {
  const int g_total = static_cast<int>(counts.size());
  for (int g = 0; g < g_total; ++g) {
    if (counts[g] < 2) {
      throw ClassCollapsed("class " + std::to_string(g) + " keeps " +
                           std::to_string(counts[g]) + " rows (need >= 2)");
    }
  }
  ClassStats out;
  out.counts = std::move(counts);
  out.means = std::move(means);
  out.scatters.reserve(g_total);
  out.pooled = Matrix::Zero(p, p);
  for (int g = 0; g < g_total; ++g) {
    Matrix w = 0.5 * (raw[g] + raw[g].transpose());
    out.pooled += w;
    out.scatters.push_back(std::move(w));
  }
  return out;
}

void check_labels(const Matrix& data, const std::vector<int>& labels, int n_classes,
                  const Mask& kept) {
  if (labels.size() != static_cast<std::size_t>(data.rows()) ||
      kept.size() != static_cast<std::size_t>(data.rows())) {
    throw DimensionMismatch("class stats: labels/mask length must equal row count");
  }
  for (int l : labels) {
    if (l < 0 || l >= n_classes) {
      throw DimensionMismatch("class stats: label out of range");
    }
  }
}

}  // namespace

ClassStats class_sufficient_stats(const Matrix& data, const std::vector<int>& labels,
                                  int n_classes, const Mask& kept) {
  check_labels(data, labels, n_classes, kept);
  const int p = static_cast<int>(data.cols());
  const long n = data.rows();

  std::vector<long> counts(n_classes, 0);
  std::vector<Vector> means(n_classes, Vector::Zero(p));
  std::vector<Matrix> raw(n_classes, Matrix::Zero(p, p));

  Vector delta(p), delta2(p);
  for (long i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) continue;
    const int g = labels[static_cast<std::size_t>(i)];
    const auto x = data.row(i).transpose();
    const double k = static_cast<double>(++counts[g]);
    delta = x - means[g];
    means[g] += delta / k;
    delta2 = x - means[g];
    raw[g] += delta * delta2.transpose();
  }
  return finalize_stats(std::move(counts), std::move(means), std::move(raw), p);
}

ClassStats augment_stats(const ClassStats& base, const Matrix& data,
                         const std::vector<int>& labels, const Mask& kept) {
  const int p = static_cast<int>(data.cols());
  if (base.dim() != p - 1) {
    throw DimensionMismatch("augment_stats: base stats must cover all but the last column");
  }
  const int n_classes = base.classes();
  check_labels(data, labels, n_classes, kept);
  const long n = data.rows();
  const int s = p - 1;

  // Replay the running means of the base columns (same arithmetic as the full
  // pass) while accumulating only the new row/column of each scatter.
  std::vector<long> counts(n_classes, 0);
  std::vector<Vector> mean_s(n_classes, Vector::Zero(s));
  std::vector<double> mean_j(n_classes, 0.0);
  std::vector<Vector> row_acc(n_classes, Vector::Zero(s));  // raw(p-1, b)
  std::vector<Vector> col_acc(n_classes, Vector::Zero(s));  // raw(b, p-1)
  std::vector<double> jj_acc(n_classes, 0.0);

  Vector delta_s(s), delta2_s(s);
  for (long i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) continue;
    const int g = labels[static_cast<std::size_t>(i)];
    const auto xs = data.row(i).head(s).transpose();
    const double xj = data(i, s);
    const double k = static_cast<double>(++counts[g]);
    delta_s = xs - mean_s[g];
    mean_s[g] += delta_s / k;
    delta2_s = xs - mean_s[g];
    const double dj = xj - mean_j[g];
    mean_j[g] += dj / k;
    const double dj2 = xj - mean_j[g];
    row_acc[g] += dj * delta2_s;
    col_acc[g] += delta_s * dj2;
    jj_acc[g] += dj * dj2;
  }

  std::vector<Vector> means(n_classes, Vector::Zero(p));
  std::vector<Matrix> raw(n_classes, Matrix::Zero(p, p));
  for (int g = 0; g < n_classes; ++g) {
    if (counts[g] != base.counts[g]) {
      throw DimensionMismatch("augment_stats: kept mask disagrees with base stats");
    }
    means[g].head(s) = mean_s[g];
    means[g](s) = mean_j[g];
    // The base stores the symmetrized scatter; undoing the averaging is not
    // needed because the block is symmetric already.
    raw[g].topLeftCorner(s, s) = base.scatters[g];
    raw[g].row(s).head(s) = row_acc[g].transpose();
    raw[g].col(s).head(s) = col_acc[g];
    raw[g](s, s) = jj_acc[g];
  }
  return finalize_stats(std::move(counts), std::move(means), std::move(raw), p);
}

}  // namespace specsel
