#include "specsel/stepwise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <string>
#include <utility>

#include "specsel/concentration.hpp"
#include "specsel/errors.hpp"
#include "specsel/gaussian.hpp"
#include "specsel/parallel.hpp"

namespace specsel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Matrix take_columns(const Matrix& from, const std::vector<int>& cols) {
  Matrix out(from.rows(), static_cast<long>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<long>(j)) = from.col(cols[j]);
  }
  return out;
}

int effective_restarts(long n, long n_star, const FitConfig& fit) {
  return (n_star == n) ? 1 : std::max(1, fit.n_restarts);
}

}  // namespace

TbicScore make_tbic_score(double trimmed_loglik, long param_count, long n_star) {
  TbicScore score;
  score.trimmed_loglik = trimmed_loglik;
  score.param_count = param_count;
  score.n_star = n_star;
  score.value = 2.0 * trimmed_loglik -
                static_cast<double>(param_count) * std::log(static_cast<double>(n_star));
  return score;
}

const char* direction_name(StepDirection direction) {
  return direction == StepDirection::Add ? "add" : "remove";
}

TbicScore tbic_grouping(const Matrix& data, const std::vector<int>& labels, int n_classes,
                        const std::vector<int>& vars, const StepwiseConfig& config,
                        const WarmStart* warm) {
  if (vars.empty()) throw Infeasible("tbic_grouping: variable set is empty");
  const Matrix sub = take_columns(data, vars);
  const TrimmedFit fit =
      fit_redda(sub, labels, n_classes, config.family, config.gamma, config.fit, warm);
  const long v = parameter_count(config.family, n_classes, static_cast<int>(vars.size()));
  return make_tbic_score(fit.trimmed_loglik, v, fit.n_star);
}

namespace {

// The conditional model: a classifier on the retained variables plus a
// regression of the candidate on a subset of them, sharing one kept mask.
// With no retained variables the class part degenerates to the label
// multinomial (its log tau terms cancel against the grouping side), and the
// regression to a single pooled Gaussian.
struct NgModel {
  GaussianClassParams cls;      // used when retained variables exist
  std::vector<double> log_tau;  // used otherwise
  RegressionFit reg;
  bool has_cls = false;
};

}  // namespace

TbicScore tbic_no_grouping(const Matrix& data, const std::vector<int>& labels, int n_classes,
                           const std::vector<int>& included, int candidate,
                           const StepwiseConfig& config, const WarmStart* warm,
                           NoGroupingDetail* detail) {
  const long n = data.rows();
  const long n_star = kept_count(n, config.gamma);
  const int c_size = static_cast<int>(included.size());
  if (c_size > 0 && n_star < static_cast<long>(n_classes) * (c_size + 1)) {
    throw Infeasible("tbic_no_grouping: too few kept rows for the class model");
  }
  const Vector y = data.col(candidate);
  const Matrix xc = take_columns(data, included);

  const int n_restarts = effective_restarts(n, n_star, config.fit);
  const std::vector<Mask> starts =
      initial_masks(n, n_star, labels, n_classes, n_restarts, config.fit.seed);

  struct Outcome {
    Concentration<NgModel> run;
    std::exception_ptr error;
  };
  std::vector<Outcome> outcomes(starts.size());

  parallel_for(starts.size(), config.fit.threads, [&](std::size_t r) {
    auto fit_on = [&](const Mask& mask) -> NgModel {
      NgModel m;
      if (c_size > 0) {
        ClassStats stats;
        if (warm != nullptr && r < warm->base_stats.size() && mask == starts[r]) {
          stats = warm->base_stats[r];
        } else {
          stats = class_sufficient_stats(xc, labels, n_classes, mask);
        }
        m.cls = make_class_params(stats, config.family, mask_count(mask));
        m.has_cls = true;
        m.reg = select_predictor_subset(y, xc, mask, config.regression);
      } else {
        std::vector<long> counts(static_cast<std::size_t>(n_classes), 0);
        long kept_total = 0;
        for (long i = 0; i < n; ++i) {
          if (!mask[static_cast<std::size_t>(i)]) continue;
          ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
          ++kept_total;
        }
        m.log_tau.resize(static_cast<std::size_t>(n_classes));
        for (int g = 0; g < n_classes; ++g) {
          if (counts[static_cast<std::size_t>(g)] == 0) {
            throw ClassCollapsed("tbic_no_grouping: a class lost every kept row");
          }
          m.log_tau[static_cast<std::size_t>(g)] =
              std::log(static_cast<double>(counts[static_cast<std::size_t>(g)]) /
                       static_cast<double>(kept_total));
        }
        m.reg = fit_linear_gaussian(y, Matrix(n, 0), mask);
      }
      return m;
    };
    auto contrib_of = [&](const NgModel& m) {
      std::vector<double> out = regression_log_density(
          m.reg, y, m.has_cls ? take_columns(xc, m.reg.subset) : Matrix(n, 0));
      if (m.has_cls) {
        const std::vector<double> cls_part = per_obs_contribution(m.cls, xc, labels);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += cls_part[i];
      } else {
        for (long i = 0; i < n; ++i) {
          out[static_cast<std::size_t>(i)] +=
              m.log_tau[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        }
      }
      return out;
    };
    try {
      outcomes[r].run = concentrate(n, n_star, starts[r], config.fit.max_iter, config.fit.tol,
                                    /*record_trace=*/false, fit_on, contrib_of);
    } catch (...) {
      outcomes[r].error = std::current_exception();
    }
  });

  int best = -1;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].error) continue;
    if (best < 0 || outcomes[r].run.loglik > outcomes[static_cast<std::size_t>(best)].run.loglik) {
      best = static_cast<int>(r);
    }
  }
  if (best < 0) {
    for (const Outcome& o : outcomes) {
      if (o.error) std::rethrow_exception(o.error);
    }
  }
  const Concentration<NgModel>& run = outcomes[static_cast<std::size_t>(best)].run;

  // With no retained variables the class side still estimates the mixing
  // proportions (G - 1 free parameters); their contribution cancels against
  // the identical term in the grouping score, keeping the comparison fair.
  const long v_class = c_size > 0 ? parameter_count(config.family, n_classes, c_size)
                                  : static_cast<long>(n_classes) - 1;
  const long v = v_class + regression_param_count(static_cast<long>(run.model.reg.subset.size()));

  if (detail != nullptr) {
    detail->kept = run.kept;
    detail->reg_subset.clear();
    for (int pos : run.model.reg.subset) {
      detail->reg_subset.push_back(included[static_cast<std::size_t>(pos)]);
    }
    const std::vector<double> reg_part = regression_log_density(
        run.model.reg, y,
        run.model.has_cls ? take_columns(xc, run.model.reg.subset) : Matrix(n, 0));
    detail->reg_loglik = 0.0;
    for (long i = 0; i < n; ++i) {
      if (run.kept[static_cast<std::size_t>(i)]) {
        detail->reg_loglik += reg_part[static_cast<std::size_t>(i)];
      }
    }
    detail->class_loglik = run.loglik - detail->reg_loglik;
  }
  return make_tbic_score(run.loglik, v, n_star);
}

namespace {

struct EvalContext {
  const Matrix& data;
  const std::vector<int>& labels;
  int n_classes;
  const std::vector<int>& included;
  const StepwiseConfig& config;
  const WarmStart* warm_grouping = nullptr;   // stats of the included columns, add sweeps
  const TbicScore* grouping_current = nullptr;  // score of the current set, remove sweeps
};

double evaluate_impl(const EvalContext& ctx, StepDirection direction, int candidate,
                     std::string* why) {
  try {
    double diff;
    if (direction == StepDirection::Add) {
      std::vector<int> vars = ctx.included;
      vars.push_back(candidate);  // last position, so warm stats line up
      const TbicScore gr = tbic_grouping(ctx.data, ctx.labels, ctx.n_classes, vars, ctx.config,
                                         ctx.warm_grouping);
      const TbicScore ng = tbic_no_grouping(ctx.data, ctx.labels, ctx.n_classes, ctx.included,
                                            candidate, ctx.config, ctx.warm_grouping);
      diff = gr.value - ng.value;
    } else {
      std::vector<int> rest;
      rest.reserve(ctx.included.size());
      for (int var : ctx.included) {
        if (var != candidate) rest.push_back(var);
      }
      TbicScore gr;
      if (ctx.grouping_current != nullptr) {
        gr = *ctx.grouping_current;
      } else {
        gr = tbic_grouping(ctx.data, ctx.labels, ctx.n_classes, ctx.included, ctx.config);
      }
      const TbicScore ng =
          tbic_no_grouping(ctx.data, ctx.labels, ctx.n_classes, rest, candidate, ctx.config);
      diff = ng.value - gr.value;
    }
    return std::isnan(diff) ? kNegInf : diff;
  } catch (const Error& e) {
    if (why != nullptr) *why = e.what();
    return kNegInf;
  }
}

}  // namespace

double evaluate_candidate(const Matrix& data, const std::vector<int>& labels, int n_classes,
                          const std::vector<int>& included, StepDirection direction,
                          int candidate, const StepwiseConfig& config) {
  EvalContext ctx{data, labels, n_classes, included, config};
  return evaluate_impl(ctx, direction, candidate, nullptr);
}

SweepResult sweep(const Matrix& data, const std::vector<int>& labels, int n_classes,
                  const std::vector<int>& included, StepDirection direction,
                  const StepwiseConfig& config) {
  const long n = data.rows();
  const int p = static_cast<int>(data.cols());
  const long n_star = kept_count(n, config.gamma);

  std::vector<int> pool;
  if (direction == StepDirection::Add) {
    for (int j = 0; j < p; ++j) {
      if (std::find(included.begin(), included.end(), j) == included.end()) pool.push_back(j);
    }
  } else {
    pool = included;
    std::sort(pool.begin(), pool.end());
  }
  SweepResult result;
  if (pool.empty()) return result;

  // Candidate evaluations run in parallel; restarts inside them stay serial.
  StepwiseConfig local = config;
  local.fit.threads = 1;
  local.step_log = nullptr;

  WarmStart warm;
  bool have_warm = false;
  TbicScore gr_current;
  bool have_gr = false;
  if (direction == StepDirection::Add && !included.empty()) {
    const Matrix xc = take_columns(data, included);
    const std::vector<Mask> starts = initial_masks(
        n, n_star, labels, n_classes, effective_restarts(n, n_star, config.fit), config.fit.seed);
    warm.base_stats.reserve(starts.size());
    for (const Mask& mask : starts) {
      warm.base_stats.push_back(class_sufficient_stats(xc, labels, n_classes, mask));
    }
    have_warm = true;
  } else if (direction == StepDirection::Remove) {
    try {
      gr_current = tbic_grouping(data, labels, n_classes, included, local);
      have_gr = true;
    } catch (const Error&) {
      // fall through; per-candidate evaluation will surface the failure
    }
  }

  std::vector<std::uint8_t> degenerate(pool.size(), 0);
  if (direction == StepDirection::Add) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto col = data.col(pool[i]);
      degenerate[i] = (col.maxCoeff() == col.minCoeff()) ? 1 : 0;
    }
  }

  EvalContext ctx{data,  labels,
                  n_classes, included,
                  local, have_warm ? &warm : nullptr,
                  have_gr ? &gr_current : nullptr};
  std::vector<double> diffs(pool.size(), kNegInf);
  std::vector<std::string> reasons(pool.size());
  parallel_for(pool.size(), config.fit.threads, [&](std::size_t i) {
    if (degenerate[i]) {
      reasons[i] = "constant column";
      return;
    }
    diffs[i] = evaluate_impl(ctx, direction, pool[i], &reasons[i]);
  });

  if (config.step_log != nullptr) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (diffs[i] == kNegInf && !reasons[i].empty()) {
        *config.step_log << "# skip\t" << direction_name(direction) << "\tcolumn=" << pool[i]
                         << '\t' << reasons[i] << '\n';
      }
    }
  }

  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (diffs[i] > result.diff) {
      result.diff = diffs[i];
      result.candidate = pool[i];
    }
  }
  if (result.candidate < 0) result.diff = kNegInf;  // every candidate skipped
  return result;
}

namespace {

void log_step(const StepwiseConfig& config, long step, StepDirection direction,
              const SweepResult& res, bool accepted) {
  if (config.step_log == nullptr) return;
  char wavelength[32] = "NA";
  if (res.candidate >= 0) {
    const double value = (config.wavelengths != nullptr &&
                          res.candidate < static_cast<int>(config.wavelengths->size()))
                             ? (*config.wavelengths)[static_cast<std::size_t>(res.candidate)]
                             : static_cast<double>(res.candidate);
    std::snprintf(wavelength, sizeof wavelength, "%.10g", value);
  }
  char diff[48];
  std::snprintf(diff, sizeof diff, "%.10g", res.diff);
  *config.step_log << step << '\t' << direction_name(direction) << '\t' << wavelength << '\t'
                   << res.candidate << '\t' << diff << '\t' << (accepted ? 1 : 0) << std::endl;
}

}  // namespace

SelectionState run_stepwise(const Matrix& data, const std::vector<int>& labels, int n_classes,
                            const StepwiseConfig& config) {
  const long p = data.cols();
  if (p < 1) throw DimensionMismatch("run_stepwise: data has no columns");
  const long max_steps = config.max_steps > 0 ? config.max_steps : 2 * p;

  if (config.step_log != nullptr) {
    *config.step_log << "# step\tdirection\twavelength\tcolumn\tdiff\taccepted" << std::endl;
  }

  SelectionState state;
  StepDirection direction = StepDirection::Add;
  int consecutive_rejections = 0;
  for (long step = 1; step <= max_steps; ++step) {
    const SweepResult res = sweep(data, labels, n_classes, state.included, direction, config);
    const bool accepted = res.candidate >= 0 && res.diff > config.min_diff;
    if (accepted) {
      if (direction == StepDirection::Add) {
        state.included.push_back(res.candidate);
      } else {
        state.included.erase(
            std::find(state.included.begin(), state.included.end(), res.candidate));
      }
      consecutive_rejections = 0;
    } else {
      ++consecutive_rejections;
    }
    state.history.push_back(
        {direction, res.candidate, res.diff, accepted, config.family, config.gamma});
    log_step(config, step, direction, res, accepted);

    if (!accepted && direction == StepDirection::Add && state.included.empty()) {
      state.terminated = true;  // nothing selected and nothing worth adding
      break;
    }
    if (consecutive_rejections >= 2) {
      state.terminated = true;
      break;
    }
    direction = direction == StepDirection::Add ? StepDirection::Remove : StepDirection::Add;
  }
  return state;
}

}  // namespace specsel
