#pragma once

// Adaptive Dormand-Prince 5(4) integrator for fixed-size Eigen state vectors.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ssb/errors.hpp"

namespace ssb {

struct OdeTolerances {
  double rel = 1e-12;
  double abs = 1e-14;
  long max_steps = 50'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  double last_step = 0;
};

/// Advances y from t_start to t_end. `step_hint` seeds the first trial step;
/// 0 picks one from the derivative scale.
template <typename State, typename Rhs>
State integrate_dopri5(Rhs&& rhs, double t_start, State y, double t_end, const OdeTolerances& tol,
                       OdeStats* stats = nullptr, double step_hint = 0) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t_end - t_start;
  if (span == 0) return y;
  detail::require(span > 0, "integrate_dopri5 integrates forward in time only");

  State k1 = rhs(t_start, y);
  double h = step_hint;
  if (h <= 0) {
    // Hairer-Norsett-Wanner first guess: 1% of the scaled |y| / |y'|.
    const auto sc = (tol.abs + tol.rel * y.cwiseAbs().array()).eval();
    const double d0 = std::sqrt((y.array() / sc).square().mean());
    const double d1 = std::sqrt((k1.array() / sc).square().mean());
    h = (d0 > 1e-5 && d1 > 1e-5) ? 0.01 * d0 / d1 : 1e-6 * span;
  }
  h = std::min(h, span);

  double t = t_start;
  long steps = 0;
  while (t < t_end) {
    if (++steps > tol.max_steps) throw OdeError("dopri5: step budget exhausted before reaching t_end");
    const bool last = t + h >= t_end;
    if (last) h = t_end - t;

    const State k2 = rhs(t + c2 * h, State(y + h * a21 * k1));
    const State k3 = rhs(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    const State k4 = rhs(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 = rhs(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 = rhs(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = rhs(t + h, y_new);
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const auto scale = (tol.abs + tol.rel * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()).eval();
    double err_norm = std::sqrt((err.array() / scale).square().mean());
    if (!std::isfinite(err_norm)) err_norm = 1e10;  // overflow: reject and shrink

    const double factor = err_norm == 0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    const double h_min = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (err_norm <= 1.0) {
      t = last ? t_end : t + h;
      y = y_new;
      k1 = k7;
      if (stats) {
        ++stats->accepted;
        stats->last_step = h;
      }
      h = std::max(h * factor, h_min);
    } else {
      if (stats) ++stats->rejected;
      h *= factor;
      if (h < h_min) throw OdeError("dopri5: step size underflow at t = " + std::to_string(t));
    }
  }
  return y;
}

}  // namespace ssb
