#pragma once

// Exact Gaussian evolution under H(t) = Pi^2/(2N) + N delta t Q^2 / 2.
//
// The state stays a Gaussian exp(-omega Q^2 / 2) with omega = -i N f'/f, where
// f solves the classical equation f'' + delta t f = 0 with f(t0) = 1 and
// f'(t0) = i omega0, omega0 = sqrt(delta t0). The Wronskian Im(conj(f) f')
// equals omega0 for all t, so Re(omega) = N omega0 / |f|^2 > 0.

#include <Eigen/Core>

#include <complex>
#include <span>
#include <vector>

#include "ssb/ai_dynamics.hpp"
#include "ssb/ode.hpp"

namespace ssb {

enum class EnvelopeMethod { Airy, OdeIntegration };

struct Envelope {
  double t = 0;
  std::complex<double> f{1, 0};
  std::complex<double> f_dot{0, 0};
  EnvelopeMethod method = EnvelopeMethod::Airy;

  double wronskian() const { return std::imag(std::conj(f) * f_dot); }
};

/// Complex Gaussian width (carries N) and the quantal phase arg f, unwrapped
/// from 0 at t0.
struct ComplexWidth {
  double t = 0;
  std::complex<double> omega{1, 0};
  double phase = 0;
  double big_n = 1;

  /// Width in the rescaled coordinates sqrt(N) Q, Pi / sqrt(N).
  std::complex<double> reduced() const { return omega / big_n; }
};

struct Moments {
  double dq2 = 0;
  double dpi2 = 0;

  double product() const { return dq2 * dpi2; }
};

struct RotationSample {
  double t = 0;
  double wrapped = 0;
  double unwrapped = 0;
};

class ExactOscillator {
 public:
  explicit ExactOscillator(const Scenario& scenario, EnvelopeMethod method = EnvelopeMethod::Airy,
                           OdeTolerances tolerances = {});

  const Scenario& scenario() const { return scenario_; }
  EnvelopeMethod method() const { return method_; }

  Envelope envelope(double t) const;
  /// `times` must be ascending and >= t0.
  std::vector<Envelope> envelope_series(std::span<const double> times) const;

  std::complex<double> omega(double t) const;
  ComplexWidth width(double t) const;
  std::vector<ComplexWidth> width_series(std::span<const double> times) const;

  Moments moments(double t) const;
  double rotation_angle(double t) const;

 private:
  bool airy_in_range(double t) const;
  bool uses_airy(std::span<const double> times) const;
  Envelope airy_envelope(double t) const;
  std::vector<Envelope> ode_series(std::span<const double> times, std::vector<double>* phases) const;

  Scenario scenario_;
  EnvelopeMethod method_;
  OdeTolerances tolerances_;
  double airy_scale_ = 1;  // delta^(1/3)
  std::complex<double> alpha_;
  std::complex<double> beta_;
};

Envelope classical_envelope(const Scenario& scenario, double t, EnvelopeMethod method = EnvelopeMethod::Airy);
ComplexWidth width_param(const Scenario& scenario, double t);

inline std::complex<double> width_from_envelope(const Envelope& e, double big_n) {
  return std::complex<double>(0, -big_n) * e.f_dot / e.f;
}

/// dq2 = 1/(2 Re w), dpi2 = |w|^2/(2 Re w).
inline Moments moments(std::complex<double> omega) {
  const double re = omega.real();
  return {1.0 / (2.0 * re), std::norm(omega) / (2.0 * re)};
}
inline Moments moments(const ComplexWidth& w) { return moments(w.omega); }

/// Principal value of arctan(Im omega), omega carrying N.
inline double rotation_angle(const ComplexWidth& w) { return std::atan(w.omega.imag()); }

/// Continuity unwrapping: a jump larger than pi/2 between neighbours is
/// treated as a branch change of the arctangent (period pi).
std::vector<double> unwrap_angles(std::span<const double> wrapped);

std::vector<RotationSample> rotation_angle_series(const ExactOscillator& oscillator, std::span<const double> times);

/// n-th member of the Gaussian-Hermite basis with the given complex width
/// on the position axis (unrescaled Q). Throws GridError when the axis
/// holds less than 1 - 1e-6 of the norm.
Eigen::VectorXcd wavefunction(const ComplexWidth& width, int n, const Eigen::VectorXd& q_axis);

}  // namespace ssb
