#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specsel/gaussian.hpp"
#include "specsel/matrix.hpp"

namespace specsel {

// Closed-form members of the eigen-decomposition covariance family
// Sigma_g = lambda_g D_g A_g D_g'. Code letters: volume, shape, orientation;
// E = equal across classes, V = varying, I = identity (axis-aligned of equal
// shape). Only the six families whose ML estimators are closed-form are
// supported.
enum class CovarianceFamily { EII, VII, EEI, VVI, EEE, VVV };

inline constexpr std::array<CovarianceFamily, 6> kAllFamilies = {
    CovarianceFamily::EII, CovarianceFamily::VII, CovarianceFamily::EEI,
    CovarianceFamily::VVI, CovarianceFamily::EEE, CovarianceFamily::VVV};

std::string_view family_code(CovarianceFamily family);
std::optional<CovarianceFamily> parse_family(std::string_view code);

// Free parameters of a G-class model on p variables: (G-1) mixing weights,
// G*p means, plus the family's covariance parameters.
long parameter_count(CovarianceFamily family, int n_classes, int n_vars);

// ML covariance estimates from kept-row sufficient statistics, one matrix per
// class (shared-family codes return G copies of the common matrix).
std::vector<Matrix> estimate_covariances(const ClassStats& stats, CovarianceFamily family,
                                         long n_total_kept);

struct GaussianClassParams {
  CovarianceFamily family = CovarianceFamily::VVV;
  std::vector<double> tau;        // mixing proportions, sum 1, all > 0
  std::vector<Vector> mu;
  std::vector<Matrix> sigma;
  std::vector<SpdFactor> chol;    // factor of sigma[g]

  int classes() const { return static_cast<int>(tau.size()); }
  int dim() const { return mu.empty() ? 0 : static_cast<int>(mu.front().size()); }
};

// tau_g = n_g / N*, means from stats, covariances from estimate_covariances
// factored with the one-shot ridge fallback.
GaussianClassParams make_class_params(const ClassStats& stats, CovarianceFamily family,
                                      long n_total_kept);

struct FitConfig;  // redda.hpp

// Fits every candidate family by trimmed ML and returns the one with the
// highest TBIC; ties broken by fewer parameters, then by code order.
// Candidates whose fit fails are skipped; throws only if all fail.
CovarianceFamily select_family(const Matrix& data, const std::vector<int>& labels,
                               int n_classes, double gamma,
                               std::span<const CovarianceFamily> candidates,
                               const FitConfig& config);

}  // namespace specsel
