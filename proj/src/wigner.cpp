#include "ssb/wigner.hpp"

#include <string>

#include "ssb/exact_dynamics.hpp"

namespace ssb {

std::complex<double> frame_width(const ComplexWidth& width, double frame_scale) {
  detail::require(frame_scale > 0, "frame scale must be positive");
  return width.omega / (width.big_n * frame_scale * frame_scale);
}

GridAxes grid_axes(std::complex<double> reduced_width, const GridSpec& spec) {
  detail::require(spec.window_sigmas >= 6, "grid window must cover at least 6 standard deviations");
  detail::require(spec.n_points >= 2, "grid needs at least two points per axis");
  const GaussianCovariance c = gaussian_covariance(reduced_width);
  Eigen::Index n = spec.n_points;
  if (spec.adapt) {
    const double ratio = std::abs(reduced_width) / reduced_width.real();
    const auto needed = static_cast<Eigen::Index>(std::ceil(2.0 * spec.window_sigmas * spec.points_per_sigma * ratio)) + 1;
    if (needed > spec.max_points) {
      throw GridError("grid needs " + std::to_string(needed) + " points per axis to resolve the state (limit " +
                      std::to_string(spec.max_points) + ")");
    }
    n = std::max(n, needed);
  }
  return {uniform_axis(spec.window_sigmas * std::sqrt(c.qq), n), uniform_axis(spec.window_sigmas * std::sqrt(c.pp), n)};
}

WignerGridd wigner(const ComplexWidth& width, const GridSpec& spec, double frame_scale) {
  const std::complex<double> w = frame_width(width, frame_scale);
  const GridAxes axes = grid_axes(w, spec);
  WignerGridd g = gaussian_wigner<double>(w, axes.q_axis, axes.p_axis);
  g.t = width.t;
  g.big_n = width.big_n;
  g.frame_scale = frame_scale;
  const double mass = grid_mass(g);
  if (std::abs(mass - 1.0) > 1e-3) {
    throw GridError("Wigner grid holds mass " + std::to_string(mass) + " (needs 1 +/- 1e-3)");
  }
  return g;
}

WignerGridd wigner(const ExactOscillator& oscillator, double t, const GridSpec& spec, double frame_scale) {
  return wigner(oscillator.width(t), spec, frame_scale);
}

}  // namespace ssb
