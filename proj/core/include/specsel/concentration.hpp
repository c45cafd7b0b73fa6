#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "specsel/matrix.hpp"

namespace specsel {

// Mask keeping the k largest contributions; ties resolved toward the lower
// row index so the result never depends on sort internals.
inline Mask top_k_mask(const std::vector<double>& contrib, long k) {
  const long n = static_cast<long>(contrib.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::nth_element(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    if (contrib[static_cast<std::size_t>(a)] != contrib[static_cast<std::size_t>(b)]) {
      return contrib[static_cast<std::size_t>(a)] > contrib[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  Mask kept(static_cast<std::size_t>(n), 0);
  for (long i = 0; i < k; ++i) kept[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
  return kept;
}

template <class Model>
struct Concentration {
  Model model;
  Mask kept;          // exactly n_star entries set
  double loglik = 0;  // sum of contributions over kept rows under model
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // per-iteration loglik when recorded
};

// One run of the concentration scheme: fit on the kept rows, re-rank every
// row by its contribution, keep the n_star best, repeat to a fixed point.
//
// fit(mask) -> Model; contrib(model) -> per-row contributions (length n).
// The objective is non-decreasing as long as fit() maximizes the kept-row
// contribution sum; a decrease (only reachable through floating-point noise
// or a fallback inside fit) reverts to the previous state and stops.
template <class FitFn, class ContribFn>
auto concentrate(long n_rows, long n_star, Mask init, int max_iter, double tol,
                 bool record_trace, FitFn&& fit, ContribFn&& contrib)
    -> Concentration<decltype(fit(std::declval<const Mask&>()))> {
  using Model = decltype(fit(std::declval<const Mask&>()));
  Concentration<Model> state;
  Mask mask = std::move(init);
  bool have_state = false;

  for (int it = 1; it <= max_iter; ++it) {
    Model model = fit(mask);
    const std::vector<double> c = contrib(model);
    Mask next = top_k_mask(c, n_star);
    double ll = 0.0;
    for (long i = 0; i < n_rows; ++i) {
      if (next[static_cast<std::size_t>(i)]) ll += c[static_cast<std::size_t>(i)];
    }

    if (have_state && ll < state.loglik) {
      state.converged = true;  // numerical fixed point
      return state;
    }
    const bool fixed_point = next == mask;
    const bool small_step = have_state && ll - state.loglik <= tol;

    state.model = std::move(model);
    state.kept = std::move(next);
    state.loglik = ll;
    state.iterations = it;
    if (record_trace) state.trace.push_back(ll);
    have_state = true;

    if (fixed_point || small_step) {
      state.converged = true;
      return state;
    }
    mask = state.kept;
  }
  return state;
}

}  // namespace specsel
