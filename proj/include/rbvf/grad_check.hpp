#pragma once

#include <cmath>
#include <functional>

#include "rbvf/param_store.hpp"

namespace rbvf {

/// Compares analytic gradients against central finite differences.
///
/// loss_fn evaluates the scalar loss from current store values without
/// touching grads. backward_fn runs the forward+backward pass and leaves
/// analytic grads in the store. Returns the max relative error
/// |analytic - numeric| / max(1e-6, |analytic| + |numeric|) over all
/// parameters. The denominator floor absorbs central-difference rounding
/// noise (~1e-16 / 2h) on parameters whose true gradient is zero, e.g.
/// behind a dead relu unit.
inline double grad_check(ParamStore& store,
                         const std::function<double()>& loss_fn,
                         const std::function<void()>& backward_fn,
                         double h = 1e-5) {
  store.zero_grads();
  backward_fn();
  double max_err = 0.0;
  for (const auto& name : store.names()) {
    const Matrix analytic = store.grads(name);
    Matrix& v = store.values(name);
    for (int i = 0; i < v.rows(); ++i) {
      for (int j = 0; j < v.cols(); ++j) {
        const double saved = v(i, j);
        v(i, j) = saved + h;
        const double lp = loss_fn();
        v(i, j) = saved - h;
        const double lm = loss_fn();
        v(i, j) = saved;
        const double numeric = (lp - lm) / (2.0 * h);
        const double a = analytic(i, j);
        const double err = std::abs(a - numeric) / std::max(1e-6, std::abs(a) + std::abs(numeric));
        max_err = std::max(max_err, err);
      }
    }
  }
  store.zero_grads();
  return max_err;
}

}  // namespace rbvf
