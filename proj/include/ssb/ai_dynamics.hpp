#pragma once

// Adiabatic-impulse description of the ramped collective oscillator: the
// state is frozen until t_hat, then follows the instantaneous eigenbasis
// picking up dynamical phases. All public times are absolute; internally
// everything is expressed in units of t_hat.

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <vector>

#include "ssb/errors.hpp"
#include "ssb/kibble_zurek.hpp"

namespace ssb {

/// Collective oscillator H(t) = Pi^2/(2N) + N delta t Q^2 / 2 started in
/// its ground state at t0.
struct Scenario {
  double big_n = 1;
  RampSpec ramp = RampSpec::from_t0(1, 1);

  static Scenario make(double big_n, RampSpec ramp) {
    detail::require(big_n > 0, "big_n must be positive");
    return Scenario{big_n, ramp};
  }

  double t_hat() const { return ramp.t_hat(); }
  double omega0() const { return std::sqrt(ramp.b0()); }
};

struct PhaseValue {
  double t = 0;
  int n = 0;
  double value = 0;
};

enum class PuncturedKind { Localization, Revival };

namespace detail {

inline constexpr double kTimeSlack = 1e-12;

inline void require_ai_domain(const Scenario& s, double t) {
  const double t_hat = s.t_hat();
  require(t >= t_hat * (1 - kTimeSlack), "adiabatic-impulse observables need t >= t_hat");
  require(s.ramp.t0() <= t_hat * (1 + kTimeSlack), "adiabatic-impulse observables need t0 <= t_hat");
}

}  // namespace detail

/// (2/3)[(t/t_hat)^(3/2) - 1]: the level-independent part of the phase.
template <std::floating_point Scalar>
Scalar interference_phase(Scalar t_over_that) {
  return Scalar(2) / Scalar(3) * (t_over_that * std::sqrt(t_over_that) - Scalar(1));
}

inline double interference_phase(const Scenario& s, double t) {
  detail::require(t >= s.t_hat() * (1 - detail::kTimeSlack), "phase undefined before t_hat");
  return interference_phase(t / s.t_hat());
}

inline PhaseValue dyn_phase(const Scenario& s, double t, int n) {
  detail::require(n >= 0, "level index must be nonnegative");
  return {t, n, interference_phase(s, t) * (n + 0.5)};
}

/// [Delta Q^2(t)]^-1, the order parameter.
inline double inv_dq2(const Scenario& s, double t) {
  detail::require_ai_domain(s, t);
  const double t_hat = s.t_hat();
  const double tau = t / t_hat;
  const double tau0 = s.ramp.t0() / t_hat;
  const double sin2 = std::pow(std::sin(interference_phase(tau)), 2);
  return 2.0 * (s.big_n / t_hat) * std::sqrt(tau * tau0) / (1.0 - (1.0 - tau0) * sin2);
}

/// [Delta Pi^2(t)]^-1.
inline double inv_dpi2(const Scenario& s, double t) {
  detail::require_ai_domain(s, t);
  const double t_hat = s.t_hat();
  const double tau = t / t_hat;
  const double tau0 = s.ramp.t0() / t_hat;
  const double sin2 = std::pow(std::sin(interference_phase(tau)), 2);
  return 2.0 * (t_hat / s.big_n) / std::sqrt(tau * tau0) / (1.0 - (1.0 - 1.0 / tau0) * sin2);
}

inline double uncertainty_product(const Scenario& s, double t) {
  return 1.0 / (inv_dq2(s, t) * inv_dpi2(s, t));
}

/// Second moments of the state while it is frozen (t0 <= t < t_hat).
inline double frozen_inv_dq2(const Scenario& s) { return 2.0 * s.big_n * s.omega0(); }
inline double frozen_inv_dpi2(const Scenario& s) { return 2.0 / (s.big_n * s.omega0()); }

/// Instants where sin^2 of the interference phase is 1 (Localization) or
/// 0 (Revival), for kappa = 0..kappa_max.
inline std::vector<double> punctured_times(PuncturedKind kind, int kappa_max, double t_hat) {
  detail::require(kappa_max >= 0, "kappa_max must be nonnegative");
  detail::require(t_hat > 0, "t_hat must be positive");
  constexpr double pi = std::numbers::pi;
  const double offset = kind == PuncturedKind::Localization ? 0.75 * pi : 0.0;
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(kappa_max) + 1);
  for (int kappa = 0; kappa <= kappa_max; ++kappa) {
    times.push_back(std::pow(1.5 * pi * kappa + offset + 1.0, 2.0 / 3.0) * t_hat);
  }
  return times;
}

/// Expansion coefficients of the ground state at frequency omega_init in the
/// eigenbasis at omega_frozen (same mass). Odd entries vanish by parity;
/// c_{2k} = (1 - r^2)^(1/4) sqrt((2k)!)/(2^k k!) r^k, r = (wf - wi)/(wf + wi).
inline Eigen::VectorXd overlap_coefficients(double omega_init, double omega_frozen, int n_max) {
  detail::require(omega_init > 0 && omega_frozen > 0, "frequencies must be positive");
  detail::require(n_max >= 0 && n_max % 2 == 0, "n_max must be a nonnegative even cutoff");
  const double r = (omega_frozen - omega_init) / (omega_frozen + omega_init);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_max + 1);
  c(0) = std::pow((1.0 - r) * (1.0 + r), 0.25);
  for (int n = 2; n <= n_max; n += 2) {
    c(n) = c(n - 2) * r * std::sqrt((n - 1.0) / n);
  }
  return c;
}

}  // namespace ssb
