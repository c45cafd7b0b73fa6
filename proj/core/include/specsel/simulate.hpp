#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specsel/family.hpp"
#include "specsel/rng.hpp"
#include "specsel/spectra.hpp"

namespace specsel {

// Adulteration applied to one clean spectrum before it joins the test set.
enum class RecipeKind { Shift, WhiteNoise, Spike, Slope };

const char* recipe_name(RecipeKind kind);

struct OutlierRecipe {
  RecipeKind kind = RecipeKind::Shift;
  // 0 = built-in default: shift 15 channels, white-noise sigma = 5x the mean
  // channel sigma, spike = +10x the channel sigma, slope constant 1.5.
  double magnitude = 0.0;
  int channel = -1;       // spike target; -1 = first class-informative channel
  int source_class = 0;   // class whose clean spectrum is adulterated
};

struct ContaminationSpec {
  double label_noise_rate = 0.0;  // in [0, 1); flips exactly floor(rate*N) labels
  std::vector<OutlierRecipe> recipes;
};

struct SimConfig {
  int n_classes = 3;
  long n_train = 300;
  long n_test = 150;
  int n_channels = 30;
  int n_relevant = 4;
  double separation = 3.0;  // class-mean gap on informative channels, in sigma units
  // Diagonal generator; families with varying volume give each class its own
  // noise scale, the equal-volume ones share it.
  CovarianceFamily family = CovarianceFamily::VVI;
  // Channels correlated (through noise only) with the first informative one,
  // to exercise the conditional-regression term without carrying class info.
  int n_correlated = 0;
  double noise_correlation = 0.6;
  ContaminationSpec contamination;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::vector<int> relevant;            // class-informative channel indices, ascending
  std::vector<long> noisy_rows;         // train rows whose labels were flipped
  std::vector<int> original_labels;     // pre-flip labels of those rows
  std::vector<long> outlier_rows;       // test rows holding adulterated spectra
  std::vector<std::string> outlier_kinds;  // recipe name per outlier row
  std::vector<int> spike_channels;      // resolved spike targets, one per spike recipe
};

struct SimulatedData {
  LabeledSpectra train;
  LabeledSpectra test;
  GroundTruth truth;
};

// One adulterated copy of `spectrum`; magnitude and channel must be resolved.
Vector apply_recipe(const Vector& spectrum, RecipeKind kind, double magnitude, int channel,
                    Rng& rng);

// Labeled train/test spectra on a nm axis with a smooth positive baseline.
// Informative channels get class-dependent means; the rest are class-free.
// Label noise goes into the training set, adulterated rows are appended to
// the test set, and the ground truth records all of it.
SimulatedData simulate_contaminated(const SimConfig& config);

}  // namespace specsel
