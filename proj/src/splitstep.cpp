#include "ssb/splitstep.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <string>

#include "ssb/exact_dynamics.hpp"

namespace ssb {

namespace {

double uniform_spacing(const Eigen::VectorXd& q_axis) {
  detail::require(q_axis.size() >= 4, "split-step axis needs at least four points");
  const Eigen::Index n = q_axis.size();
  const double dq = (q_axis(n - 1) - q_axis(0)) / static_cast<double>(n - 1);
  detail::require(dq > 0, "split-step axis must be ascending");
  for (Eigen::Index i = 1; i < n; ++i) {
    detail::require(std::abs(q_axis(i) - q_axis(i - 1) - dq) <= 1e-9 * dq, "split-step axis must be uniform");
  }
  return dq;
}

void check_boundary(const Eigen::VectorXcd& psi, double threshold, double t) {
  const double peak = psi.cwiseAbs().maxCoeff();
  const double edge = std::max(std::abs(psi(0)), std::abs(psi(psi.size() - 1)));
  if (edge > threshold * peak) {
    throw AliasingError("split-step: boundary amplitude " + std::to_string(edge / peak) +
                        " of peak at t = " + std::to_string(t));
  }
}

}  // namespace

double splitstep_max_dt(const Scenario& scenario, double t_final) {
  return 0.01 / std::sqrt(scenario.ramp.delta() * t_final);
}

Eigen::VectorXcd splitstep_propagate(Eigen::VectorXcd psi, const Eigen::VectorXd& q_axis, double big_n,
                                     const std::function<double(double)>& field, double t_start, double t_final,
                                     double dt, const SplitStepOptions& options) {
  detail::require(psi.size() == q_axis.size(), "split-step: state and axis sizes differ");
  detail::require(big_n > 0, "split-step: big_n must be positive");
  detail::require(dt > 0, "split-step: dt must be positive");
  detail::require(t_final >= t_start, "split-step: t_final precedes t_start");
  const Eigen::Index n = q_axis.size();
  const double dq = uniform_spacing(q_axis);
  check_boundary(psi, options.alias_threshold, t_start);
  if (t_final == t_start) return psi;

  const long steps = static_cast<long>(std::ceil((t_final - t_start) / dt - 1e-12));
  const double h = (t_final - t_start) / static_cast<double>(steps);

  // Conjugate momenta in FFT order.
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dq);
  Eigen::VectorXcd half_kinetic(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double k = dk * static_cast<double>(j < (n + 1) / 2 ? j : j - n);
    half_kinetic(j) = std::polar(1.0, -0.25 * h * k * k / big_n);
  }
  const Eigen::ArrayXd q2 = q_axis.array().square();

  Eigen::FFT<double> fft;
  Eigen::VectorXcd spectrum(n);
  Eigen::VectorXcd work(n);
  for (long s = 0; s < steps; ++s) {
    const double t_mid = t_start + (static_cast<double>(s) + 0.5) * h;
    const double b = field(t_mid);
    fft.fwd(spectrum, psi);
    spectrum.array() *= half_kinetic.array();
    fft.inv(work, spectrum);
    for (Eigen::Index i = 0; i < n; ++i) work(i) *= std::polar(1.0, -0.5 * h * big_n * b * q2(i));
    fft.fwd(spectrum, work);
    spectrum.array() *= half_kinetic.array();
    fft.inv(psi, spectrum);
    if ((s + 1) % 64 == 0) check_boundary(psi, options.alias_threshold, t_start + (s + 1) * h);
  }
  check_boundary(psi, options.alias_threshold, t_final);
  return psi;
}

Eigen::VectorXcd splitstep_evolve(const Scenario& scenario, const Eigen::VectorXd& q_axis, double t_final, double dt,
                                  const SplitStepOptions& options) {
  const double t0 = scenario.ramp.t0();
  detail::require(t_final >= t0, "split-step: t_final precedes t0");
  const double dt_max = splitstep_max_dt(scenario, t_final);
  detail::require(dt <= dt_max * (1 + 1e-12),
                  "split-step: dt must resolve the instantaneous period (dt <= " + std::to_string(dt_max) + ")");
  const ComplexWidth start{t0, {scenario.big_n * scenario.omega0(), 0.0}, 0.0, scenario.big_n};
  Eigen::VectorXcd psi = wavefunction(start, 0, q_axis);
  const RampSpec ramp = scenario.ramp;
  return splitstep_propagate(std::move(psi), q_axis, scenario.big_n, [ramp](double t) { return ramp.field(t); }, t0,
                             t_final, dt, options);
}

double grid_norm(const Eigen::VectorXcd& psi, const Eigen::VectorXd& q_axis) {
  return std::sqrt(psi.squaredNorm() * uniform_spacing(q_axis));
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXd& q_axis) {
  detail::require(a.size() == b.size() && a.size() == q_axis.size(), "fidelity: size mismatch");
  return std::abs(a.dot(b)) * uniform_spacing(q_axis);
}

double l2_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXd& q_axis) {
  detail::require(a.size() == b.size() && a.size() == q_axis.size(), "l2_distance: size mismatch");
  return std::sqrt((a - b).squaredNorm() * uniform_spacing(q_axis));
}

}  // namespace ssb
