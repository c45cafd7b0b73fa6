// Acceptance harness: one check per shipped guarantee, each printing a
// single "criterion N: PASS|FAIL|SKIP — detail" line. Exit 0 when nothing
// failed; a single requested criterion that gets skipped exits 77 so test
// runners can record it as skipped rather than passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "specsel/errors.hpp"
#include "specsel/family.hpp"
#include "specsel/model_io.hpp"
#include "specsel/redda.hpp"
#include "specsel/simulate.hpp"
#include "specsel/spectra.hpp"
#include "specsel/stepwise.hpp"
#include "test_util.hpp"

using namespace specsel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  std::string status;  // "PASS" | "FAIL" | "SKIP"
  std::string detail;
};

Outcome pass(std::string detail) { return {"PASS", std::move(detail)}; }
Outcome fail(std::string detail) { return {"FAIL", std::move(detail)}; }
Outcome skip(std::string detail) { return {"SKIP", std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, const char* spec = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// The shared instance schedule for criteria 1 and 2.
testutil::Instance scheduled_instance(int k) {
  const int g = 2 + (k % 2);
  const int p = 1 + (k % 5);
  const long n = 50 + static_cast<long>((static_cast<unsigned>(k) * 7919u) % 151u);
  return testutil::random_instance(static_cast<std::uint64_t>(k) + 1, g, p, n, 2.0);
}

Matrix take_columns(const Matrix& from, const std::vector<int>& cols) {
  Matrix out(from.rows(), static_cast<long>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<long>(j)) = from.col(cols[j]);
  return out;
}

// ---------------------------------------------------------------------------
// 1. With trimming off, the fit is the closed-form per-class MLE.

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto inst = scheduled_instance(k);
    const long n = inst.data.rows();
    const Mask all(static_cast<std::size_t>(n), 1);
    const oracle::ClassMoments moments =
        oracle::two_pass_moments(inst.data, inst.labels, inst.n_classes, all);
    for (CovarianceFamily family : kAllFamilies) {
      FitConfig config;
      config.seed = static_cast<std::uint64_t>(k);
      config.n_restarts = 1;  // gamma = 0 keeps every row; restarts are moot
      const TrimmedFit fit = fit_redda(inst.data, inst.labels, inst.n_classes, family, 0.0, config);
      const auto covs = oracle::family_covariances(moments, family, n);
      for (int g = 0; g < inst.n_classes; ++g) {
        const double tau = static_cast<double>(moments.counts[static_cast<std::size_t>(g)]) /
                           static_cast<double>(n);
        worst = std::max(worst, std::fabs(fit.params.tau[static_cast<std::size_t>(g)] - tau));
        worst = std::max(worst, (fit.params.mu[static_cast<std::size_t>(g)] -
                                 moments.means[static_cast<std::size_t>(g)])
                                    .cwiseAbs()
                                    .maxCoeff());
        worst = std::max(worst, (fit.params.sigma[static_cast<std::size_t>(g)] -
                                 covs[static_cast<std::size_t>(g)])
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    }
  }
  const double elapsed = seconds_since(start);
  const std::string detail = "100 instances x 6 families, max parameter error " + fmt(worst) +
                             " (limit 1e-10), " + fmt(elapsed, "%.2f") + "s (limit 5s)";
  if (worst >= 1e-10) return fail(detail);
  if (elapsed >= 5.0) return fail(detail);
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 2. The trimmed log-likelihood never decreases along any restart.

Outcome criterion2() {
  long violations = 0;
  long traces = 0;
  for (int k = 0; k < 100; ++k) {
    const auto inst = scheduled_instance(k);
    for (double gamma : {0.05, 0.1, 0.25}) {
      for (CovarianceFamily family : kAllFamilies) {
        FitConfig config;
        config.seed = static_cast<std::uint64_t>(k);
        config.record_trace = true;
        const TrimmedFit fit =
            fit_redda(inst.data, inst.labels, inst.n_classes, family, gamma, config);
        for (const auto& trace : fit.restart_traces) {
          ++traces;
          for (std::size_t t = 1; t < trace.size(); ++t) {
            if (trace[t] < trace[t - 1]) ++violations;
          }
        }
      }
    }
  }
  const std::string detail = std::to_string(traces) + " restart traces over 100 instances x 3 " +
                             "trim levels x 6 families, " + std::to_string(violations) +
                             " decreases (limit 0)";
  return violations == 0 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 3. Best-of-restarts matches the exhaustive trim-subset maximum.

Outcome criterion3() {
  const auto start = std::chrono::steady_clock::now();
  int matched = 0;
  for (int k = 0; k < 100; ++k) {
    const long n = 10 + (k % 5);
    const int p = 1 + (k % 2);
    const double gamma = 0.15;  // trims one or two rows at these sizes
    const auto inst =
        testutil::random_instance(static_cast<std::uint64_t>(k) + 2100, 2, p, n, 2.0);
    FitConfig config;
    config.seed = static_cast<std::uint64_t>(k);
    config.n_restarts = 20;
    const TrimmedFit fit =
        fit_redda(inst.data, inst.labels, 2, CovarianceFamily::VVI, gamma, config);
    const double best = oracle::exhaustive_trimmed_loglik(inst.data, inst.labels, 2,
                                                          CovarianceFamily::VVI, fit.n_star);
    if (fit.trimmed_loglik > best + 1e-8) {
      return fail("seed " + std::to_string(k) + ": fit " + fmt(fit.trimmed_loglik, "%.10f") +
                  " exceeds the exhaustive maximum " + fmt(best, "%.10f"));
    }
    if (std::fabs(fit.trimmed_loglik - best) <= 1e-8 * std::max(1.0, std::fabs(best))) ++matched;
  }
  const double elapsed = seconds_since(start);
  const std::string detail = std::to_string(matched) +
                             "/100 seeds attain the exhaustive maximum (needed 95), never exceed "
                             "it, " +
                             fmt(elapsed, "%.2f") + "s (limit 30s)";
  if (matched < 95) return fail(detail);
  if (elapsed >= 30.0) return fail(detail);
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 4. With trimming off, both stepwise scores equal plain-criterion oracles.

Outcome criterion4() {
  double worst = 0.0;
  int empty_cases = 0;
  for (int k = 0; k < 50; ++k) {
    const int g = 2 + (k % 3);
    const int p = 2 + (k % 3);
    const long n = 60 + 3L * k;
    const auto inst =
        testutil::random_instance(static_cast<std::uint64_t>(k) + 900, g, p, n, 1.2);
    const CovarianceFamily family = kAllFamilies[k % 6];
    StepwiseConfig config;
    config.family = family;
    config.gamma = 0.0;
    config.fit.seed = static_cast<std::uint64_t>(k);
    config.fit.n_restarts = 1;

    std::vector<int> included;
    for (int j = 0; j < k % p; ++j) included.push_back(j);
    const int candidate = static_cast<int>(included.size());
    if (included.empty()) ++empty_cases;

    std::vector<int> grouping_vars = included;
    grouping_vars.push_back(candidate);
    const TbicScore gr = tbic_grouping(inst.data, inst.labels, g, grouping_vars, config);
    const double gr_oracle =
        oracle::plain_bic_grouping(inst.data, inst.labels, g, family, grouping_vars);
    worst = std::max(worst, std::fabs(gr.value - gr_oracle));

    const TbicScore ng = tbic_no_grouping(inst.data, inst.labels, g, included, candidate, config);
    const double ng_oracle =
        oracle::plain_bic_no_grouping(inst.data, inst.labels, g, family, included, candidate);
    worst = std::max(worst, std::fabs(ng.value - ng_oracle));
  }
  const std::string detail = "50 instances, max score error " + fmt(worst) + " (limit 1e-8), " +
                             std::to_string(empty_cases) + " empty-set first-step cases";
  return worst < 1e-8 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 5. The free-parameter table is exact.

Outcome criterion5() {
  for (int g = 1; g <= 4; ++g) {
    for (int p = 1; p <= 6; ++p) {
      for (CovarianceFamily family : kAllFamilies) {
        const long got = parameter_count(family, g, p);
        const long want = oracle::param_count(family, g, p);
        if (got != want) {
          return fail(std::string(family_code(family)) + " at G=" + std::to_string(g) +
                      ", p=" + std::to_string(p) + ": got " + std::to_string(got) + ", want " +
                      std::to_string(want));
        }
      }
    }
  }
  if (parameter_count(CovarianceFamily::VVV, 4, 6) != 111) {
    return fail("free-covariance count at G=4, p=6 is not 111");
  }
  return pass("all six families exact on (G,p) in {1..4}x{1..6}; free-covariance G=4,p=6 = 111");
}

// ---------------------------------------------------------------------------
// 6. Selection recovers the informative channels under contamination.

SimConfig contaminated_config(std::uint64_t seed, double separation, double label_noise) {
  SimConfig config;
  config.n_classes = 3;
  config.n_train = 300;
  config.n_test = 150;
  config.n_channels = 30;
  config.n_relevant = 4;
  config.separation = separation;
  config.family = CovarianceFamily::VVI;
  config.contamination.label_noise_rate = label_noise;
  config.seed = seed;
  return config;
}

StepwiseConfig pipeline_config(std::uint64_t seed) {
  StepwiseConfig config;
  config.family = CovarianceFamily::VVI;
  config.gamma = 0.1;
  // Trimming lets both competing models cherry-pick rows, which inflates the
  // apparent evidence for useless channels by a few points; informative
  // channels clear several hundred. Demand "very strong" evidence (10 on the
  // 2-log-Bayes-factor scale) instead of any positive sliver.
  config.min_diff = 10.0;
  config.fit.seed = seed;
  config.fit.threads = 0;  // all available workers
  return config;
}

Outcome criterion6() {
  int successes = 0;
  int missed_relevant = 0;
  int too_many_extras = 0;
  double worst_seconds = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SimulatedData sim = simulate_contaminated(contaminated_config(seed, 3.0, 0.05));
    const auto start = std::chrono::steady_clock::now();
    const SelectionState state =
        run_stepwise(sim.train.absorbance, sim.train.labels, 3, pipeline_config(seed));
    worst_seconds = std::max(worst_seconds, seconds_since(start));

    bool all_relevant = true;
    for (int r : sim.truth.relevant) {
      if (std::find(state.included.begin(), state.included.end(), r) == state.included.end()) {
        all_relevant = false;
      }
    }
    const long extras = static_cast<long>(state.included.size()) -
                        (static_cast<long>(sim.truth.relevant.size()) -
                         std::count_if(sim.truth.relevant.begin(), sim.truth.relevant.end(),
                                       [&](int r) {
                                         return std::find(state.included.begin(),
                                                          state.included.end(),
                                                          r) == state.included.end();
                                       }));
    if (!all_relevant) ++missed_relevant;
    if (extras > 2) ++too_many_extras;
    if (all_relevant && extras <= 2) ++successes;
  }
  const std::string detail =
      std::to_string(successes) + "/20 seeds select all 4 informative channels with <=2 false "
                                  "inclusions (needed 18); " +
      std::to_string(missed_relevant) + " missed a channel, " + std::to_string(too_many_extras) +
      " over-selected; slowest seed " + fmt(worst_seconds, "%.1f") + "s (limit 60s)";
  if (successes < 18) return fail(detail);
  if (worst_seconds >= 60.0) return fail(detail);
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 7. Zero separation yields an empty selection.

Outcome criterion7() {
  int empty = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SimulatedData sim = simulate_contaminated(contaminated_config(seed, 0.0, 0.05));
    const SelectionState state =
        run_stepwise(sim.train.absorbance, sim.train.labels, 3, pipeline_config(seed));
    if (state.included.empty()) ++empty;
  }
  const std::string detail =
      std::to_string(empty) + "/20 zero-separation seeds select nothing (needed 18)";
  return empty >= 18 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 8. Adulterated rows sink to the bottom of the marginal-density ranking,
//    except a spike the selection never looks at.

Outcome criterion8() {
  int on_channel_ok = 0;    // all four adulterations caught
  int off_channel_ok = 0;   // exactly three caught, the unseen spike missed
  int spike_neglected = 0;  // the miss is specifically the spike
  int usable_seeds = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    // Wider class separation than the recovery check: adulteration visibility
    // on a handful of channels needs the mixture levels far enough apart that
    // a displaced spectrum cannot be re-explained by a neighbouring class.
    const SimConfig base = contaminated_config(seed, 4.0, 0.05);
    const SimulatedData clean = simulate_contaminated(base);
    const SelectionState state =
        run_stepwise(clean.train.absorbance, clean.train.labels, 3, pipeline_config(seed));
    if (state.included.empty()) continue;
    ++usable_seeds;

    std::vector<int> selected = state.included;
    std::sort(selected.begin(), selected.end());
    StepwiseConfig pipe = pipeline_config(seed);
    const TrimmedFit fit =
        fit_redda(take_columns(clean.train.absorbance, selected), clean.train.labels, 3,
                  CovarianceFamily::VVI, 0.1, pipe.fit);

    const int source_class = static_cast<int>(seed % 3);
    auto run_style = [&](int spike_channel) {
      SimConfig cfg = base;
      // Shift by 14 of 30 channels: a 15-channel shift would be resonant with
      // the period-15 component of the simulated baseline and can leave the
      // selected channels almost unmoved.
      cfg.contamination.recipes = {
          {RecipeKind::Shift, 14.0, -1, source_class},
          {RecipeKind::WhiteNoise, 0.0, -1, source_class},
          {RecipeKind::Spike, 0.0, spike_channel, source_class},
          {RecipeKind::Slope, 0.0, -1, source_class},
      };
      const SimulatedData sim = simulate_contaminated(cfg);
      const OutlierReport report =
          marginal_log_density(fit.params, take_columns(sim.test.absorbance, selected));
      return std::make_pair(sim.truth, report);
    };

    // spike on a channel the model actually uses
    {
      const auto [truth, report] = run_style(selected.front());
      int in_bottom4 = 0;
      for (long row : truth.outlier_rows) {
        if (report.rank[static_cast<std::size_t>(row)] <= 4) ++in_bottom4;
      }
      if (in_bottom4 == 4) ++on_channel_ok;
    }

    // spike on a channel the selection discarded
    int off_channel = -1;
    for (int j = 0; j < base.n_channels; ++j) {
      if (!std::binary_search(selected.begin(), selected.end(), j)) {
        off_channel = j;
        break;
      }
    }
    {
      const auto [truth, report] = run_style(off_channel);
      int in_bottom3 = 0;
      long missed_row = -1;
      for (long row : truth.outlier_rows) {
        if (report.rank[static_cast<std::size_t>(row)] <= 3) {
          ++in_bottom3;
        } else {
          missed_row = row;
        }
      }
      if (in_bottom3 == 3) {
        ++off_channel_ok;
        const auto it = std::find(truth.outlier_rows.begin(), truth.outlier_rows.end(), missed_row);
        if (truth.outlier_kinds[static_cast<std::size_t>(
                it - truth.outlier_rows.begin())] == "spike") {
          ++spike_neglected;
        }
      }
    }
  }
  const std::string detail =
      "spike on a used channel: " + std::to_string(on_channel_ok) +
      "/20 seeds put all 4 adulterations in the bottom-4 (needed 18); spike on a discarded "
      "channel: " +
      std::to_string(off_channel_ok) + "/20 put exactly 3 of 4 in the bottom-3 (needed 18), " +
      std::to_string(spike_neglected) + " of those misses were the spike; " +
      std::to_string(usable_seeds) + " usable seeds";
  return (on_channel_ok >= 18 && off_channel_ok >= 18) ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 9. Label noise costs at most two points of test accuracy.

Outcome criterion9() {
  double noisy_sum = 0.0;
  double clean_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto accuracy_of = [&](double label_noise) {
      const SimulatedData sim =
          simulate_contaminated(contaminated_config(seed, 3.0, label_noise));
      const SelectionState state =
          run_stepwise(sim.train.absorbance, sim.train.labels, 3, pipeline_config(seed));
      std::vector<int> selected = state.included;
      std::sort(selected.begin(), selected.end());
      if (selected.empty()) return 1.0 / 3.0;  // no model; majority-free guess
      StepwiseConfig pipe = pipeline_config(seed);
      const TrimmedFit fit =
          fit_redda(take_columns(sim.train.absorbance, selected), sim.train.labels, 3,
                    CovarianceFamily::VVI, 0.1, pipe.fit);
      const Prediction pred =
          predict_map(fit.params, take_columns(sim.test.absorbance, selected));
      long correct = 0;
      for (long i = 0; i < sim.test.rows(); ++i) {
        if (pred.labels[static_cast<std::size_t>(i)] ==
            sim.test.labels[static_cast<std::size_t>(i)]) {
          ++correct;
        }
      }
      return static_cast<double>(correct) / static_cast<double>(sim.test.rows());
    };
    noisy_sum += accuracy_of(0.05);
    clean_sum += accuracy_of(0.0);
  }
  const double noisy = noisy_sum / 20.0;
  const double clean = clean_sum / 20.0;
  const double gap = std::fabs(noisy - clean) * 100.0;
  const std::string detail = "mean test accuracy " + fmt(noisy * 100.0, "%.1f") +
                             "% with 5% label noise vs " + fmt(clean * 100.0, "%.1f") +
                             "% clean-trained; gap " + fmt(gap, "%.2f") + "pp (limit 2pp)";
  return gap <= 2.0 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 10. Reruns at different worker counts produce byte-identical artifacts.

std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome criterion10(const std::string& bin) {
  if (bin.empty()) return skip("needs --bin <path to the command-line tool>");
  const fs::path scratch = fs::temp_directory_path() / "specsel_acc_determinism";
  fs::remove_all(scratch);
  fs::create_directories(scratch / "a");
  fs::create_directories(scratch / "b");

  const std::string sim_cmd = "'" + bin + "' simulate --out-dir '" + (scratch / "sim").string() +
                              "' --classes 3 --train-rows 150 --test-rows 40 --channels 12"
                              " --relevant 2 --separation 4 --label-noise 0.05 --seed 9"
                              " > /dev/null 2>&1";
  if (std::system(sim_cmd.c_str()) != 0) return fail("simulate run failed");

  auto select_in = [&](const char* sub, int threads) {
    const std::string cmd = "cd '" + (scratch / sub).string() + "' && '" + bin +
                            "' select --input ../sim/train.csv --unit nm --gamma 0.1"
                            " --family VVI --seed 9 --threads " +
                            std::to_string(threads) + " --out model.json > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  if (select_in("a", 1) != 0) return fail("selection run with 1 worker failed");
  if (select_in("b", 8) != 0) return fail("selection run with 8 workers failed");

  const std::string model_a = file_bytes(scratch / "a" / "model.json");
  const std::string model_b = file_bytes(scratch / "b" / "model.json");
  const std::string steps_a = file_bytes(scratch / "a" / "model.json.steps.tsv");
  const std::string steps_b = file_bytes(scratch / "b" / "model.json.steps.tsv");
  if (model_a.empty() || steps_a.empty()) return fail("artifacts missing after the runs");

  std::error_code ec;
  fs::remove_all(scratch, ec);
  if (model_a != model_b) return fail("model artifacts differ between 1 and 8 workers");
  if (steps_a != steps_b) return fail("step logs differ between 1 and 8 workers");
  return pass("model (" + std::to_string(model_a.size()) + " bytes) and step log (" +
              std::to_string(steps_a.size()) + " bytes) byte-identical at 1 and 8 workers");
}

// ---------------------------------------------------------------------------
// 11. Published-dataset reproduction, only when the data is supplied.

struct DatasetResult {
  long correct = 0;
  long rows = 0;
  std::vector<double> wavelengths;
  std::string error;
};

DatasetResult run_dataset(const std::string& bin, const fs::path& dir, const char* unit) {
  DatasetResult result;
  const fs::path model_path = fs::temp_directory_path() / "specsel_acc_dataset_model.json";
  const std::string cmd = "'" + bin + "' select --input '" + (dir / "train.csv").string() +
                          "' --unit " + unit +
                          " --gamma 0.1 --family auto --seed 0 --out '" + model_path.string() +
                          "' > /dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) {
    result.error = "selection failed on " + dir.string();
    return result;
  }
  try {
    const ModelArtifact model = load_model(model_path.string());
    result.wavelengths = model.selected_wavelengths;
    CsvSchema schema;
    schema.unit = parse_unit(unit);
    const LabeledSpectra test = load_csv((dir / "test.csv").string(), schema);
    Matrix projected;
    if (test.cols() == static_cast<long>(model.selected.size())) {
      projected = test.absorbance;
    } else {
      projected = take_columns(test.absorbance, model.selected);
    }
    const Prediction pred = predict_map(model.params, projected);
    result.rows = projected.rows();
    for (long i = 0; i < projected.rows(); ++i) {
      const std::string& truth =
          test.class_names[static_cast<std::size_t>(test.labels[static_cast<std::size_t>(i)])];
      const std::string& guess =
          model.class_names[static_cast<std::size_t>(pred.labels[static_cast<std::size_t>(i)])];
      if (truth == guess) ++result.correct;
    }
  } catch (const Error& e) {
    result.error = e.what();
  }
  return result;
}

bool has_wavelength_near(const std::vector<double>& axis, double target, double window) {
  for (double w : axis) {
    if (std::fabs(w - target) <= window) return true;
  }
  return false;
}

Outcome criterion11(const std::string& bin, const std::string& data_dir) {
  if (data_dir.empty()) {
    return skip("set SPECSEL_DATA_DIR (or pass --data-dir) to the proprietary spectra to run "
                "the reproduction checks");
  }
  if (bin.empty()) return skip("needs --bin <path to the command-line tool>");
  const fs::path root(data_dir);
  struct Target {
    const char* name;
    const char* unit;
    long correct;
    long n_vars;
  };
  // expected test hits and selected-set sizes, each within +/-2
  const Target targets[] = {
      {"starches", "cm-1", 32, 6},
      {"meat", "nm", 107, 6},
      {"olive/reduced", "cm-1", -805, 3},  // negative = per-mille accuracy target
      {"olive/full", "cm-1", -802, 5},
  };
  std::string detail;
  bool all_ok = true;
  bool any_present = false;
  for (const Target& target : targets) {
    const fs::path dir = root / target.name;
    if (!fs::exists(dir / "train.csv") || !fs::exists(dir / "test.csv")) {
      detail += std::string(target.name) + ": absent; ";
      continue;
    }
    any_present = true;
    const DatasetResult result = run_dataset(bin, dir, target.unit);
    if (!result.error.empty()) {
      all_ok = false;
      detail += std::string(target.name) + ": " + result.error + "; ";
      continue;
    }
    const long want_correct =
        target.correct >= 0
            ? target.correct
            : std::lround(static_cast<double>(-target.correct) / 1000.0 *
                          static_cast<double>(result.rows));
    const long n_vars = static_cast<long>(result.wavelengths.size());
    bool ok = std::labs(result.correct - want_correct) <= 2 &&
              std::labs(n_vars - target.n_vars) <= 2;
    std::string extra;
    if (std::string(target.name) == "starches") {
      const bool anchors = has_wavelength_near(result.wavelengths, 997.0, 2.0) &&
                           has_wavelength_near(result.wavelengths, 995.0, 2.0);
      extra = anchors ? ", anchor wavenumbers found" : ", anchor wavenumbers 997/995 missing";
      ok = ok && anchors;
    }
    all_ok = all_ok && ok;
    detail += std::string(target.name) + ": " + std::to_string(result.correct) + "/" +
              std::to_string(result.rows) + " correct (wanted " + std::to_string(want_correct) +
              "+/-2), " + std::to_string(n_vars) + " variables (wanted " +
              std::to_string(target.n_vars) + "+/-2)" + extra + "; ";
  }
  if (!any_present) return skip("no dataset directories under " + data_dir + "; " + detail);
  return all_ok ? pass(detail) : fail(detail);
}

}  // namespace

int main(int argc, char** argv) {
  int requested = 0;  // 0 = all
  std::string bin;
  std::string data_dir;
  if (const char* env = std::getenv("SPECSEL_DATA_DIR")) data_dir = env;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto next = [&](const char* flag) -> std::string {
      if (i + 1 >= argc) {
        std::cerr << "acceptance: " << flag << " needs a value\n";
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--criterion") {
      requested = std::atoi(next("--criterion").c_str());
      if (requested < 1 || requested > 11) {
        std::cerr << "acceptance: --criterion takes 1..11\n";
        return 2;
      }
    } else if (arg == "--bin") {
      // Criterion 10 runs the tool from scratch directories, so a relative
      // path would stop resolving after the cd.
      bin = fs::absolute(next("--bin")).string();
    } else if (arg == "--data-dir") {
      data_dir = next("--data-dir");
    } else if (arg == "--help" || arg == "-h") {
      std::cout << "usage: specsel_acceptance [--criterion N] [--bin CLI_PATH] "
                   "[--data-dir DIR]\n";
      return 0;
    } else {
      std::cerr << "acceptance: unknown argument '" << arg << "'\n";
      return 2;
    }
  }

  bool any_fail = false;
  bool single_skip = false;
  for (int n = 1; n <= 11; ++n) {
    if (requested != 0 && requested != n) continue;
    Outcome outcome;
    try {
      switch (n) {
        case 1: outcome = criterion1(); break;
        case 2: outcome = criterion2(); break;
        case 3: outcome = criterion3(); break;
        case 4: outcome = criterion4(); break;
        case 5: outcome = criterion5(); break;
        case 6: outcome = criterion6(); break;
        case 7: outcome = criterion7(); break;
        case 8: outcome = criterion8(); break;
        case 9: outcome = criterion9(); break;
        case 10: outcome = criterion10(bin); break;
        case 11: outcome = criterion11(bin, data_dir); break;
      }
    } catch (const std::exception& e) {
      outcome = fail(std::string("unexpected error: ") + e.what());
    }
    std::cout << "criterion " << n << ": " << outcome.status << " — " << outcome.detail
              << std::endl;
    if (outcome.status == "FAIL") any_fail = true;
    if (outcome.status == "SKIP" && requested == n) single_skip = true;
  }
  if (any_fail) return 1;
  if (single_skip) return 77;
  return 0;
}
