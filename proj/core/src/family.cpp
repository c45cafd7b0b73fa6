#include "specsel/family.hpp"

#include <cmath>
#include <limits>

#include "specsel/redda.hpp"

namespace specsel {

std::string_view family_code(CovarianceFamily family) {
  switch (family) {
    case CovarianceFamily::EII: return "EII";
    case CovarianceFamily::VII: return "VII";
    case CovarianceFamily::EEI: return "EEI";
    case CovarianceFamily::VVI: return "VVI";
    case CovarianceFamily::EEE: return "EEE";
    case CovarianceFamily::VVV: return "VVV";
  }
  return "???";
}

std::optional<CovarianceFamily> parse_family(std::string_view code) {
  for (auto f : kAllFamilies) {
    if (family_code(f) == code) return f;
  }
  return std::nullopt;
}

long parameter_count(CovarianceFamily family, int n_classes, int n_vars) {
  const long g = n_classes;
  const long p = n_vars;
  long cov = 0;
  switch (family) {
    case CovarianceFamily::EII: cov = 1; break;
    case CovarianceFamily::VII: cov = g; break;
    case CovarianceFamily::EEI: cov = p; break;
    case CovarianceFamily::VVI: cov = g * p; break;
    case CovarianceFamily::EEE: cov = p * (p + 1) / 2; break;
    case CovarianceFamily::VVV: cov = g * p * (p + 1) / 2; break;
  }
  return (g - 1) + g * p + cov;
}

std::vector<Matrix> estimate_covariances(const ClassStats& stats, CovarianceFamily family,
                                         long n_total_kept) {
  const int g_total = stats.classes();
  const int p = stats.dim();
  const double n_star = static_cast<double>(n_total_kept);
  std::vector<Matrix> out;
  out.reserve(g_total);

  switch (family) {
    case CovarianceFamily::EII: {
      const double scale = stats.pooled.trace() / (n_star * p);
      Matrix shared = scale * Matrix::Identity(p, p);
      out.assign(g_total, shared);
      break;
    }
    case CovarianceFamily::VII: {
      for (int g = 0; g < g_total; ++g) {
        const double scale = stats.scatters[g].trace() /
                             (static_cast<double>(stats.counts[g]) * p);
        out.push_back(scale * Matrix::Identity(p, p));
      }
      break;
    }
    case CovarianceFamily::EEI: {
      Matrix shared = (stats.pooled.diagonal() / n_star).asDiagonal();
      out.assign(g_total, shared);
      break;
    }
    case CovarianceFamily::VVI: {
      for (int g = 0; g < g_total; ++g) {
        out.emplace_back(
            (stats.scatters[g].diagonal() / static_cast<double>(stats.counts[g]))
                .asDiagonal());
      }
      break;
    }
    case CovarianceFamily::EEE: {
      Matrix shared = stats.pooled / n_star;
      out.assign(g_total, shared);
      break;
    }
    case CovarianceFamily::VVV: {
      for (int g = 0; g < g_total; ++g) {
        out.push_back(stats.scatters[g] / static_cast<double>(stats.counts[g]));
      }
      break;
    }
  }
  return out;
}

GaussianClassParams make_class_params(const ClassStats& stats, CovarianceFamily family,
                                      long n_total_kept) {
  GaussianClassParams params;
  params.family = family;
  const int g_total = stats.classes();
  params.tau.resize(g_total);
  for (int g = 0; g < g_total; ++g) {
    params.tau[g] = static_cast<double>(stats.counts[g]) / static_cast<double>(n_total_kept);
  }
  params.mu = stats.means;
  params.sigma = estimate_covariances(stats, family, n_total_kept);
  params.chol.reserve(g_total);
  for (int g = 0; g < g_total; ++g) {
    params.chol.push_back(factor_with_ridge(params.sigma[g]));
  }
  return params;
}

CovarianceFamily select_family(const Matrix& data, const std::vector<int>& labels,
                               int n_classes, double gamma,
                               std::span<const CovarianceFamily> candidates,
                               const FitConfig& config) {
  if (candidates.empty()) {
    throw Infeasible("select_family: no candidate families");
  }
  const int p = static_cast<int>(data.cols());
  bool any = false;
  double best_value = -std::numeric_limits<double>::infinity();
  long best_params = 0;
  CovarianceFamily best = candidates.front();
  std::string last_error;

  for (auto family : candidates) {
    try {
      const TrimmedFit fit = fit_redda(data, labels, n_classes, family, gamma, config);
      const long v = parameter_count(family, n_classes, p);
      const double value =
          2.0 * fit.trimmed_loglik - static_cast<double>(v) * std::log(static_cast<double>(fit.n_star));
      if (!any || value > best_value ||
          (value == best_value &&
           (v < best_params ||
            (v == best_params && static_cast<int>(family) < static_cast<int>(best))))) {
        any = true;
        best_value = value;
        best_params = v;
        best = family;
      }
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (!any) {
    throw Infeasible("select_family: every candidate failed (last: " + last_error + ")");
  }
  return best;
}

}  // namespace specsel
