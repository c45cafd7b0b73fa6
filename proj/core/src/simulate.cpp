#include "specsel/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "specsel/errors.hpp"

namespace specsel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

bool varying_volume(CovarianceFamily family) {
  return family == CovarianceFamily::VII || family == CovarianceFamily::VVI ||
         family == CovarianceFamily::VVV;
}

// Zero-padded so lexicographic and numeric class order agree.
std::string padded_class_name(int g, int n_classes) {
  const std::string digits = std::to_string(g + 1);
  const std::size_t width = std::to_string(n_classes).size();
  return "c" + std::string(width - digits.size(), '0') + digits;
}

void validate(const SimConfig& config) {
  if (config.n_classes < 1) throw Infeasible("simulate: need at least one class");
  if (config.n_channels < 1) throw Infeasible("simulate: need at least one channel");
  if (config.n_relevant < 0 || config.n_relevant > config.n_channels) {
    throw Infeasible("simulate: informative channel count outside [0, P]");
  }
  if (config.n_correlated < 0 ||
      config.n_correlated > config.n_channels - std::max(config.n_relevant, 1)) {
    throw Infeasible("simulate: correlated channel count does not fit");
  }
  if (config.n_correlated > 0 && config.n_relevant == 0) {
    throw Infeasible("simulate: correlated channels need an informative anchor");
  }
  if (!(std::abs(config.noise_correlation) < 1.0)) {
    throw Infeasible("simulate: |noise correlation| must be < 1");
  }
  if (config.separation < 0.0) throw Infeasible("simulate: separation must be nonnegative");
  if (config.n_train < config.n_classes) throw Infeasible("simulate: too few training rows");
  if (config.n_test < 0) throw Infeasible("simulate: negative test row count");
  const double rate = config.contamination.label_noise_rate;
  if (!(rate >= 0.0 && rate < 1.0)) throw Infeasible("simulate: label-noise rate outside [0,1)");
  if (rate > 0.0 && config.n_classes < 2) {
    throw Infeasible("simulate: label noise needs at least two classes");
  }
  for (const OutlierRecipe& recipe : config.contamination.recipes) {
    if (recipe.magnitude < 0.0) throw Infeasible("simulate: negative recipe magnitude");
    if (recipe.source_class < 0 || recipe.source_class >= config.n_classes) {
      throw Infeasible("simulate: recipe source class out of range");
    }
    if (recipe.channel >= config.n_channels) {
      throw Infeasible("simulate: recipe channel out of range");
    }
  }
}

}  // namespace

const char* recipe_name(RecipeKind kind) {
  switch (kind) {
    case RecipeKind::Shift: return "shift";
    case RecipeKind::WhiteNoise: return "white-noise";
    case RecipeKind::Spike: return "spike";
    case RecipeKind::Slope: return "slope";
  }
  return "unknown";
}

Vector apply_recipe(const Vector& spectrum, RecipeKind kind, double magnitude, int channel,
                    Rng& rng) {
  const long p = spectrum.size();
  switch (kind) {
    case RecipeKind::Shift: {
      const long k = static_cast<long>(std::llround(magnitude));
      if (k < 1 || k >= p) throw Infeasible("shift: channel count outside [1, P)");
      Vector out(p);
      for (long j = 0; j < p - k; ++j) out(j) = spectrum(j + k);
      for (long j = p - k; j < p; ++j) out(j) = spectrum(p - 1);
      return out;
    }
    case RecipeKind::WhiteNoise: {
      Vector out(p);
      for (long j = 0; j < p; ++j) out(j) = spectrum(j) + magnitude * rng.normal();
      return out;
    }
    case RecipeKind::Spike: {
      if (channel < 0 || channel >= p) throw DimensionMismatch("spike: channel out of range");
      Vector out = spectrum;
      out(channel) += magnitude;
      return out;
    }
    case RecipeKind::Slope: {
      if (magnitude <= 0.0) throw Infeasible("slope: constant must be positive");
      return magnitude * spectrum;
    }
  }
  throw Infeasible("unknown recipe kind");
}

SimulatedData simulate_contaminated(const SimConfig& config) {
  validate(config);
  const int g_count = config.n_classes;
  const int p = config.n_channels;

  Rng axis_rng(mix_seed(config.seed, 1));
  Rng train_rng(mix_seed(config.seed, 2));
  Rng flip_rng(mix_seed(config.seed, 3));
  Rng test_rng(mix_seed(config.seed, 4));
  Rng outlier_rng(mix_seed(config.seed, 5));

  // Axis and a peaked positive baseline. Several incommensurate harmonics keep
  // the curve from being locally flat, so shift and slope adulterations
  // displace every channel visibly instead of hiding in a smooth ramp. The
  // extra phases derive from the two drawn ones to keep the rng streams of
  // everything downstream unchanged; the baseline is a per-channel constant,
  // so class structure and covariances do not depend on it.
  std::vector<double> wavelengths(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) wavelengths[static_cast<std::size_t>(j)] = 400.0 + 2.0 * j;
  const double phase1 = kTwoPi * axis_rng.uniform();
  const double phase2 = kTwoPi * axis_rng.uniform();
  Vector baseline(p);
  for (int j = 0; j < p; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(p);
    baseline(j) = 10.0 + 2.0 * std::sin(kTwoPi * t + phase1) +
                  0.5 * std::cos(2.0 * kTwoPi * t + phase2) +
                  1.5 * std::sin(3.0 * kTwoPi * t + 2.0 * phase1) +
                  1.0 * std::cos(5.0 * kTwoPi * t + phase1 + phase2);
  }

  GroundTruth truth;
  truth.relevant = axis_rng.sample_indices(p, config.n_relevant);

  std::vector<int> correlated;
  if (config.n_correlated > 0) {
    std::vector<int> complement;
    for (int j = 0; j < p; ++j) {
      if (!std::binary_search(truth.relevant.begin(), truth.relevant.end(), j)) {
        complement.push_back(j);
      }
    }
    axis_rng.shuffle(complement);
    complement.resize(static_cast<std::size_t>(config.n_correlated));
    std::sort(complement.begin(), complement.end());
    correlated = std::move(complement);
  }

  // Class mean offsets: per informative channel, a random ordering of G
  // equally spaced levels scaled by the separation.
  Matrix offsets = Matrix::Zero(g_count, p);
  for (int k : truth.relevant) {
    std::vector<int> perm(static_cast<std::size_t>(g_count));
    for (int g = 0; g < g_count; ++g) perm[static_cast<std::size_t>(g)] = g;
    axis_rng.shuffle(perm);
    for (int g = 0; g < g_count; ++g) {
      offsets(g, k) = config.separation *
                      (perm[static_cast<std::size_t>(g)] - 0.5 * (g_count - 1));
    }
  }

  std::vector<double> class_scale(static_cast<std::size_t>(g_count), 1.0);
  if (varying_volume(config.family) && g_count > 1) {
    for (int g = 0; g < g_count; ++g) {
      class_scale[static_cast<std::size_t>(g)] =
          0.8 + 0.4 * static_cast<double>(g) / static_cast<double>(g_count - 1);
    }
  }

  const double rho = config.noise_correlation;
  const double rho_rest = std::sqrt(1.0 - rho * rho);
  const int anchor = truth.relevant.empty() ? -1 : truth.relevant.front();
  auto draw_row = [&](int g, Rng& rng) {
    Vector z(p);
    for (int j = 0; j < p; ++j) z(j) = rng.normal();
    Vector row(p);
    const double s = class_scale[static_cast<std::size_t>(g)];
    for (int j = 0; j < p; ++j) row(j) = baseline(j) + offsets(g, j) + s * z(j);
    for (int c : correlated) {
      row(c) = baseline(c) + s * (rho * z(anchor) + rho_rest * z(c));
    }
    return row;
  };

  SimulatedData out;
  for (int g = 0; g < g_count; ++g) {
    out.train.class_names.push_back(padded_class_name(g, g_count));
  }
  out.test.class_names = out.train.class_names;
  out.train.wavelengths = wavelengths;
  out.test.wavelengths = wavelengths;
  out.train.unit = WavelengthUnit::Nanometer;
  out.test.unit = WavelengthUnit::Nanometer;

  out.train.absorbance.resize(config.n_train, p);
  out.train.labels.resize(static_cast<std::size_t>(config.n_train));
  for (long i = 0; i < config.n_train; ++i) {
    const int g = static_cast<int>(i % g_count);
    out.train.absorbance.row(i) = draw_row(g, train_rng);
    out.train.labels[static_cast<std::size_t>(i)] = g;
  }

  const long n_flips = static_cast<long>(config.contamination.label_noise_rate *
                                         static_cast<double>(config.n_train));
  if (n_flips > 0) {
    const std::vector<int> rows =
        flip_rng.sample_indices(static_cast<int>(config.n_train), static_cast<int>(n_flips));
    for (int row : rows) {
      const int old_label = out.train.labels[static_cast<std::size_t>(row)];
      const int shift = 1 + static_cast<int>(flip_rng.below(static_cast<std::uint64_t>(g_count - 1)));
      out.train.labels[static_cast<std::size_t>(row)] = (old_label + shift) % g_count;
      truth.noisy_rows.push_back(row);
      truth.original_labels.push_back(old_label);
    }
  }

  const long n_outliers = static_cast<long>(config.contamination.recipes.size());
  out.test.absorbance.resize(config.n_test + n_outliers, p);
  out.test.labels.resize(static_cast<std::size_t>(config.n_test + n_outliers));
  for (long i = 0; i < config.n_test; ++i) {
    const int g = static_cast<int>(i % g_count);
    out.test.absorbance.row(i) = draw_row(g, test_rng);
    out.test.labels[static_cast<std::size_t>(i)] = g;
  }

  double mean_scale = 0.0;
  for (double s : class_scale) mean_scale += s;
  mean_scale /= static_cast<double>(g_count);

  for (long r = 0; r < n_outliers; ++r) {
    const OutlierRecipe& recipe = config.contamination.recipes[static_cast<std::size_t>(r)];
    const Vector clean = draw_row(recipe.source_class, outlier_rng);
    double magnitude = recipe.magnitude;
    int channel = recipe.channel;
    switch (recipe.kind) {
      case RecipeKind::Shift:
        if (magnitude == 0.0) magnitude = 15.0;
        break;
      case RecipeKind::WhiteNoise:
        if (magnitude == 0.0) magnitude = 5.0 * mean_scale;
        break;
      case RecipeKind::Spike:
        if (channel < 0) channel = truth.relevant.empty() ? 0 : truth.relevant.front();
        if (magnitude == 0.0) {
          magnitude = 10.0 * class_scale[static_cast<std::size_t>(recipe.source_class)];
        }
        truth.spike_channels.push_back(channel);
        break;
      case RecipeKind::Slope:
        if (magnitude == 0.0) magnitude = 1.5;
        break;
    }
    out.test.absorbance.row(config.n_test + r) =
        apply_recipe(clean, recipe.kind, magnitude, channel, outlier_rng);
    out.test.labels[static_cast<std::size_t>(config.n_test + r)] = recipe.source_class;
    truth.outlier_rows.push_back(config.n_test + r);
    truth.outlier_kinds.emplace_back(recipe_name(recipe.kind));
  }

  out.train.validate();
  out.test.validate();
  out.truth = std::move(truth);
  return out;
}

}  // namespace specsel
