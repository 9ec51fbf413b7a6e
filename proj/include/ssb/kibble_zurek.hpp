#pragma once

// Timescale matching for the linear ramp B(t) = delta t.

#include <cmath>
#include <concepts>
#include <string_view>

#include "ssb/errors.hpp"

namespace ssb {

/// Relative half-width of the band around t_hat labelled FreezeOut.
inline constexpr double kFreezeOutBand = 1e-9;

template <std::floating_point Scalar>
Scalar relaxation_time(Scalar delta, Scalar t) {
  detail::require(delta > 0, "delta must be positive");
  detail::require(t > 0, "t must be positive");
  return Scalar(1) / std::sqrt(delta * t);
}

/// Fixed point of relaxation_time(delta, t) = t, i.e. delta^(-1/3).
template <std::floating_point Scalar>
Scalar freeze_out_time(Scalar delta) {
  detail::require(delta > 0, "delta must be positive");
  return Scalar(1) / std::cbrt(delta);
}

/// Largest ramp rate for which a ramp starting at b0 is quasi-adiabatic.
template <std::floating_point Scalar>
Scalar adiabaticity_bound(Scalar b0) {
  detail::require(b0 > 0, "b0 must be positive");
  return b0 * std::sqrt(b0);
}

class RampSpec {
 public:
  static RampSpec from_t0(double delta, double t0) {
    detail::require(delta > 0, "ramp delta must be positive");
    detail::require(t0 > 0, "ramp t0 must be positive");
    return RampSpec(delta, t0, delta * t0);
  }

  static RampSpec from_b0(double delta, double b0) {
    detail::require(delta > 0, "ramp delta must be positive");
    detail::require(b0 > 0, "ramp b0 must be positive");
    return RampSpec(delta, b0 / delta, b0);
  }

  double delta() const { return delta_; }
  double t0() const { return t0_; }
  double b0() const { return b0_; }
  double field(double t) const { return delta_ * t; }
  double t_hat() const { return freeze_out_time(delta_); }

  bool operator==(const RampSpec&) const = default;

 private:
  RampSpec(double delta, double t0, double b0) : delta_(delta), t0_(t0), b0_(b0) {}

  double delta_;
  double t0_;
  double b0_;
};

enum class Regime { Adiabatic, Impulse, FreezeOut };

constexpr std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Adiabatic: return "Adiabatic";
    case Regime::Impulse: return "Impulse";
    case Regime::FreezeOut: return "FreezeOut";
  }
  return "?";
}

inline Regime classify_regime(const RampSpec& ramp, double t, double band = kFreezeOutBand) {
  detail::require(t >= ramp.t0(), "classify_regime: t precedes the ramp start t0");
  const double t_hat = ramp.t_hat();
  if (t < t_hat * (1 - band)) return Regime::Impulse;
  if (t > t_hat * (1 + band)) return Regime::Adiabatic;
  return Regime::FreezeOut;
}

}  // namespace ssb
