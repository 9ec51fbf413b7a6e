#include "ssb/exact_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ssb/airy.hpp"

namespace ssb {

namespace {

using State = Eigen::Matrix<double, 5, 1>;  // Re f, Im f, Re f', Im f', arg f

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Envelope envelope_from_state(double t, const State& y) {
  return {t, {y(0), y(1)}, {y(2), y(3)}, EnvelopeMethod::OdeIntegration};
}

void require_ascending(std::span<const double> times, double t0) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    detail::require(times[i] >= t0, "envelope requested before the ramp start t0");
    if (i > 0) detail::require(times[i] >= times[i - 1], "time samples must be ascending");
  }
}

// Increment of a monotonically increasing angle, given wrapped endpoints.
// Values just below 2 pi are roundoff on a vanishing increment.
double forward_increment(double from, double to) {
  double r = std::fmod(to - from, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r > kTwoPi - 1e-9 ? 0.0 : r;
}

}  // namespace

ExactOscillator::ExactOscillator(const Scenario& scenario, EnvelopeMethod method, OdeTolerances tolerances)
    : scenario_(scenario), method_(method), tolerances_(tolerances) {
  airy_scale_ = std::cbrt(scenario_.ramp.delta());
  const double t0 = scenario_.ramp.t0();
  if (airy_in_range(t0)) {
    const AiryValues a = airy(-airy_scale_ * t0);
    const std::complex<double> i_w(0, scenario_.omega0() / airy_scale_);
    alpha_ = std::numbers::pi * (a.bi_prime + i_w * a.bi);
    beta_ = -std::numbers::pi * (a.ai_prime + i_w * a.ai);
  }
}

bool ExactOscillator::airy_in_range(double t) const { return airy_scale_ * t <= kAiryReliableArgument; }

Envelope ExactOscillator::airy_envelope(double t) const {
  const AiryValues a = airy(-airy_scale_ * t);
  return {t, alpha_ * a.ai + beta_ * a.bi, -airy_scale_ * (alpha_ * a.ai_prime + beta_ * a.bi_prime),
          EnvelopeMethod::Airy};
}

std::vector<Envelope> ExactOscillator::ode_series(std::span<const double> times, std::vector<double>* phases) const {
  const double delta = scenario_.ramp.delta();
  auto rhs = [delta](double t, const State& y) {
    State d;
    d(0) = y(2);
    d(1) = y(3);
    d(2) = -delta * t * y(0);
    d(3) = -delta * t * y(1);
    d(4) = (y(0) * y(3) - y(1) * y(2)) / (y(0) * y(0) + y(1) * y(1));
    return d;
  };
  State y;
  y << 1.0, 0.0, 0.0, scenario_.omega0(), 0.0;
  double t = scenario_.ramp.t0();
  double hint = 0;
  std::vector<Envelope> out;
  out.reserve(times.size());
  if (phases) phases->clear();
  for (double target : times) {
    OdeStats stats;
    y = integrate_dopri5(rhs, t, y, target, tolerances_, &stats, hint);
    if (stats.last_step > 0) hint = stats.last_step;
    t = target;
    out.push_back(envelope_from_state(t, y));
    if (phases) phases->push_back(y(4));
  }
  return out;
}

bool ExactOscillator::uses_airy(std::span<const double> times) const {
  return method_ == EnvelopeMethod::Airy && airy_in_range(scenario_.ramp.t0()) &&
         (times.empty() || airy_in_range(times.back()));
}

std::vector<Envelope> ExactOscillator::envelope_series(std::span<const double> times) const {
  require_ascending(times, scenario_.ramp.t0());
  if (!uses_airy(times)) return ode_series(times, nullptr);
  std::vector<Envelope> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(airy_envelope(t));
  return out;
}

Envelope ExactOscillator::envelope(double t) const {
  const double ts[] = {t};
  return envelope_series(ts).front();
}

std::complex<double> ExactOscillator::omega(double t) const {
  return width_from_envelope(envelope(t), scenario_.big_n);
}

std::vector<ComplexWidth> ExactOscillator::width_series(std::span<const double> times) const {
  require_ascending(times, scenario_.ramp.t0());
  std::vector<ComplexWidth> out;
  out.reserve(times.size());
  const double big_n = scenario_.big_n;
  if (!uses_airy(times)) {
    std::vector<double> phases;
    const std::vector<Envelope> env = ode_series(times, &phases);
    for (std::size_t i = 0; i < env.size(); ++i) {
      out.push_back({env[i].t, width_from_envelope(env[i], big_n), phases[i], big_n});
    }
    return out;
  }
  const std::vector<Envelope> env = envelope_series(times);

  // arg f increases monotonically (its rate is omega0/|f|^2). Steps shorter
  // than half the shortest local oscillation period keep each increment
  // below 2 pi, so the wrapped difference recovers it exactly.
  const double delta = scenario_.ramp.delta();
  double t = scenario_.ramp.t0();
  double phase = 0;
  double arg = std::arg(airy_envelope(t).f);
  for (const Envelope& e : env) {
    while (t < e.t) {
      const double h_max = 0.5 * std::numbers::pi / std::sqrt(delta * e.t);
      const double t_next = std::min(e.t, t + h_max);
      const double arg_next = std::arg(t_next == e.t ? e.f : airy_envelope(t_next).f);
      phase += forward_increment(arg, arg_next);
      arg = arg_next;
      t = t_next;
    }
    out.push_back({e.t, width_from_envelope(e, big_n), phase, big_n});
  }
  return out;
}

ComplexWidth ExactOscillator::width(double t) const {
  const double ts[] = {t};
  return width_series(ts).front();
}

Moments ExactOscillator::moments(double t) const { return ssb::moments(omega(t)); }

double ExactOscillator::rotation_angle(double t) const { return std::atan(omega(t).imag()); }

Envelope classical_envelope(const Scenario& scenario, double t, EnvelopeMethod method) {
  return ExactOscillator(scenario, method).envelope(t);
}

ComplexWidth width_param(const Scenario& scenario, double t) { return ExactOscillator(scenario).width(t); }

std::vector<double> unwrap_angles(std::span<const double> wrapped) {
  std::vector<double> out(wrapped.begin(), wrapped.end());
  double offset = 0;
  for (std::size_t i = 1; i < wrapped.size(); ++i) {
    const double jump = wrapped[i] - wrapped[i - 1];
    if (jump > std::numbers::pi / 2) offset -= std::numbers::pi;
    if (jump < -std::numbers::pi / 2) offset += std::numbers::pi;
    out[i] = wrapped[i] + offset;
  }
  return out;
}

std::vector<RotationSample> rotation_angle_series(const ExactOscillator& oscillator, std::span<const double> times) {
  const std::vector<Envelope> env = oscillator.envelope_series(times);
  std::vector<double> wrapped;
  wrapped.reserve(env.size());
  for (const Envelope& e : env) wrapped.push_back(std::atan(width_from_envelope(e, oscillator.scenario().big_n).imag()));
  const std::vector<double> unwrapped = unwrap_angles(wrapped);
  std::vector<RotationSample> out;
  out.reserve(env.size());
  for (std::size_t i = 0; i < env.size(); ++i) out.push_back({env[i].t, wrapped[i], unwrapped[i]});
  return out;
}

Eigen::VectorXcd wavefunction(const ComplexWidth& width, int n, const Eigen::VectorXd& q_axis) {
  detail::require(n >= 0, "wavefunction: level index must be nonnegative");
  detail::require(q_axis.size() >= 2, "wavefunction: axis needs at least two points");
  const double re = width.omega.real();
  detail::require(re > 0, "wavefunction: Re(omega) must be positive");
  const double root = std::sqrt(re);
  const Eigen::ArrayXd y = root * q_axis.array();

  // Normalized Hermite functions by the stable three-term recurrence.
  Eigen::ArrayXd h_prev = std::pow(std::numbers::pi, -0.25) * (-0.5 * y.square()).exp();
  Eigen::ArrayXd h = h_prev;
  if (n >= 1) {
    h = std::sqrt(2.0) * y * h_prev;
    for (int k = 2; k <= n; ++k) {
      Eigen::ArrayXd next = std::sqrt(2.0 / k) * y * h - std::sqrt((k - 1.0) / k) * h_prev;
      h_prev = std::move(h);
      h = std::move(next);
    }
  }

  const std::complex<double> global = std::polar(std::pow(re, 0.25), -(n + 0.5) * width.phase);
  Eigen::VectorXcd psi(q_axis.size());
  for (Eigen::Index i = 0; i < q_axis.size(); ++i) {
    const double q = q_axis(i);
    psi(i) = global * h(i) * std::polar(1.0, -0.5 * width.omega.imag() * q * q);
  }

  double norm = 0;
  for (Eigen::Index i = 1; i < q_axis.size(); ++i) {
    norm += 0.5 * (std::norm(psi(i)) + std::norm(psi(i - 1))) * (q_axis(i) - q_axis(i - 1));
  }
  if (std::abs(1.0 - norm) > 1e-6) {
    throw GridError("wavefunction: axis holds norm " + std::to_string(norm) + " (needs 1 +/- 1e-6)");
  }
  return psi;
}

}  // namespace ssb
