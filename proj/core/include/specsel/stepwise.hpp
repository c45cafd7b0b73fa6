#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "specsel/family.hpp"
#include "specsel/matrix.hpp"
#include "specsel/redda.hpp"
#include "specsel/regression.hpp"

namespace specsel {

// Trimmed BIC of a fitted model: 2*loglik - v*log(n_star).
struct TbicScore {
  double trimmed_loglik = 0.0;
  long param_count = 0;
  long n_star = 0;
  double value = -std::numeric_limits<double>::infinity();
};

TbicScore make_tbic_score(double trimmed_loglik, long param_count, long n_star);

enum class StepDirection { Add, Remove };

const char* direction_name(StepDirection direction);

struct StepRecord {
  StepDirection direction = StepDirection::Add;
  int candidate = -1;  // column index; -1 when the pool was empty
  double tbic_diff = -std::numeric_limits<double>::infinity();
  bool accepted = false;
  CovarianceFamily family = CovarianceFamily::EEI;
  double gamma = 0.0;
};

struct SelectionState {
  std::vector<int> included;       // in inclusion order, no duplicates
  std::vector<StepRecord> history; // every sweep, accepted or not
  bool terminated = false;         // stopped by the rejection rule, not by max_steps
};

struct StepwiseConfig {
  CovarianceFamily family = CovarianceFamily::EEI;
  double gamma = 0.0;
  double min_diff = 0.0;  // accept a step iff best diff exceeds this
  long max_steps = 0;     // 0 = twice the number of variables
  FitConfig fit;
  RegSearchConfig regression;

  // Optional tab-separated progress sink; one line per sweep.
  std::ostream* step_log = nullptr;
  // Channel labels for log lines; column index is used when absent.
  const std::vector<double>* wavelengths = nullptr;
};

// Diagnostics from the conditional-model fit, mostly for tests and manifests.
struct NoGroupingDetail {
  Mask kept;
  std::vector<int> reg_subset;  // variable indices (subset of `included`)
  double class_loglik = 0.0;
  double reg_loglik = 0.0;
};

// Score of the model where `vars` jointly discriminate the classes.
TbicScore tbic_grouping(const Matrix& data, const std::vector<int>& labels, int n_classes,
                        const std::vector<int>& vars, const StepwiseConfig& config,
                        const WarmStart* warm = nullptr);

// Score of the model where `candidate` carries no class information beyond
// `included`: a classifier on `included` plus a regression of the candidate
// on a BIC-chosen subset of it, trimmed jointly by one kept mask. With
// `included` empty the class part reduces to the label multinomial (whose
// proportion terms cancel against the grouping score) and the regression to
// a single pooled Gaussian for the candidate.
TbicScore tbic_no_grouping(const Matrix& data, const std::vector<int>& labels, int n_classes,
                           const std::vector<int>& included, int candidate,
                           const StepwiseConfig& config, const WarmStart* warm = nullptr,
                           NoGroupingDetail* detail = nullptr);

// Evidence difference for one candidate; positive favors the move.
// Component failures yield -infinity (the candidate is skipped).
double evaluate_candidate(const Matrix& data, const std::vector<int>& labels, int n_classes,
                          const std::vector<int>& included, StepDirection direction,
                          int candidate, const StepwiseConfig& config);

struct SweepResult {
  int candidate = -1;  // -1: empty pool or every candidate skipped
  double diff = -std::numeric_limits<double>::infinity();
};

// Evaluates every eligible candidate (in parallel) and returns the best by
// (diff, lowest column index); independent of worker count.
SweepResult sweep(const Matrix& data, const std::vector<int>& labels, int n_classes,
                  const std::vector<int>& included, StepDirection direction,
                  const StepwiseConfig& config);

// Greedy search: alternate add and remove sweeps from the empty set until a
// rejected sweep is immediately followed by another rejection (or the first
// add sweep rejects, or max_steps is reached).
SelectionState run_stepwise(const Matrix& data, const std::vector<int>& labels, int n_classes,
                            const StepwiseConfig& config);

}  // namespace specsel
