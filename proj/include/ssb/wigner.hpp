#pragma once

// Phase-space grids for the Gaussian Wigner function
//   W = (1/pi) exp(-a x^2) exp(-(p + b x)^2 / a),   a + i b = reduced width,
// and second-moment shape statistics of sampled grids.
//
// Axes hold x = s sqrt(N) Q and p = Pi / (s sqrt(N)); s = frame_scale is 1
// for the rescaled coordinates and sqrt(omega0) for the oscillator frame,
// where the state at t0 is the isotropic vacuum. The map is symplectic, so
// W keeps its form with the reduced width divided by s^2.

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>

#include "ssb/errors.hpp"

namespace ssb {

template <std::floating_point Scalar>
using AxisX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <std::floating_point Scalar>
struct WignerGrid {
  AxisX<Scalar> q_axis;
  AxisX<Scalar> p_axis;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;  // rows follow q, columns p
  double t = 0;
  double big_n = 1;
  double frame_scale = 1;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

using WignerGridd = WignerGrid<double>;

template <std::floating_point Scalar>
AxisX<Scalar> uniform_axis(Scalar half_width, Eigen::Index n) {
  detail::require(n >= 2, "axis needs at least two points");
  detail::require(half_width > 0, "axis half-width must be positive");
  return AxisX<Scalar>::LinSpaced(n, -half_width, half_width);
}

/// Trapezoid weights for a uniform axis.
template <std::floating_point Scalar>
AxisX<Scalar> trapezoid_weights(const AxisX<Scalar>& axis) {
  const Eigen::Index n = axis.size();
  const Scalar h = (axis(n - 1) - axis(0)) / Scalar(n - 1);
  AxisX<Scalar> w = AxisX<Scalar>::Constant(n, h);
  w(0) = w(n - 1) = h / Scalar(2);
  return w;
}

/// Second moments of a Gaussian Wigner function with the given reduced width.
struct GaussianCovariance {
  double qq = 0;
  double qp = 0;
  double pp = 0;
};

inline GaussianCovariance gaussian_covariance(std::complex<double> reduced_width) {
  const double a = reduced_width.real();
  const double b = reduced_width.imag();
  detail::require(a > 0, "Gaussian width needs a positive real part");
  return {0.5 / a, -0.5 * b / a, 0.5 * (a * a + b * b) / a};
}

template <std::floating_point Scalar>
WignerGrid<Scalar> gaussian_wigner(std::complex<double> reduced_width, const AxisX<Scalar>& q_axis,
                                   const AxisX<Scalar>& p_axis) {
  const Scalar a = static_cast<Scalar>(reduced_width.real());
  const Scalar b = static_cast<Scalar>(reduced_width.imag());
  detail::require(a > 0, "Gaussian width needs a positive real part");
  WignerGrid<Scalar> g;
  g.q_axis = q_axis;
  g.p_axis = p_axis;
  g.values.resize(q_axis.size(), p_axis.size());
  const Scalar inv_pi = Scalar(1) / std::numbers::pi_v<Scalar>;
  for (Eigen::Index j = 0; j < p_axis.size(); ++j) {
    for (Eigen::Index i = 0; i < q_axis.size(); ++i) {
      const Scalar x = q_axis(i);
      const Scalar crest = p_axis(j) + b * x;
      g.values(i, j) = inv_pi * std::exp(-a * x * x - crest * crest / a);
    }
  }
  return g;
}

template <std::floating_point Scalar>
Scalar grid_mass(const WignerGrid<Scalar>& g) {
  return trapezoid_weights(g.q_axis).dot(g.values * trapezoid_weights(g.p_axis));
}

/// Integral over p, as a function of q.
template <std::floating_point Scalar>
AxisX<Scalar> q_marginal(const WignerGrid<Scalar>& g) {
  return g.values * trapezoid_weights(g.p_axis);
}

/// Integral over q, as a function of p.
template <std::floating_point Scalar>
AxisX<Scalar> p_marginal(const WignerGrid<Scalar>& g) {
  return g.values.transpose() * trapezoid_weights(g.q_axis);
}

struct ShapeStatistics {
  double mass = 0;
  GaussianCovariance covariance;
  double minor_variance = 0;
  double major_variance = 0;
  double aspect_ratio = 0;  // minor / major
  double major_axis_angle = 0;  // principal axis, measured from the q axis
  double crest_slope = 0;  // regression of p on q: the crest p = slope * q
};

/// Grid-quadrature second moments (about the grid mean) and their
/// principal-component decomposition.
template <std::floating_point Scalar>
ShapeStatistics shape_statistics(const WignerGrid<Scalar>& g) {
  const AxisX<Scalar> wq = trapezoid_weights(g.q_axis);
  const AxisX<Scalar> wp = trapezoid_weights(g.p_axis);
  const auto weighted = (g.values.array().colwise() * wq.array()).rowwise() * wp.array().transpose();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = weighted.matrix();
  const double mass = static_cast<double>(m.sum());
  detail::require(mass > 0, "shape statistics need positive grid mass");
  const AxisX<Scalar> row = m.rowwise().sum();
  const AxisX<Scalar> col = m.colwise().sum().transpose();
  const double mq = static_cast<double>(row.dot(g.q_axis)) / mass;
  const double mp = static_cast<double>(col.dot(g.p_axis)) / mass;
  const AxisX<Scalar> dq = g.q_axis.array() - static_cast<Scalar>(mq);
  const AxisX<Scalar> dp = g.p_axis.array() - static_cast<Scalar>(mp);

  ShapeStatistics s;
  s.mass = mass;
  s.covariance.qq = static_cast<double>(row.dot(dq.cwiseProduct(dq))) / mass;
  s.covariance.pp = static_cast<double>(col.dot(dp.cwiseProduct(dp))) / mass;
  s.covariance.qp = static_cast<double>(dq.dot(m * dp)) / mass;

  Eigen::Matrix2d c;
  c << s.covariance.qq, s.covariance.qp, s.covariance.qp, s.covariance.pp;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(c);
  s.minor_variance = eig.eigenvalues()(0);
  s.major_variance = eig.eigenvalues()(1);
  s.aspect_ratio = s.minor_variance / s.major_variance;
  const Eigen::Vector2d major = eig.eigenvectors().col(1);
  s.major_axis_angle = std::atan(major(1) / major(0));
  s.crest_slope = s.covariance.qp / s.covariance.qq;
  return s;
}

/// Ridge angle of a grid expressed in unrescaled coordinates: the crest
/// Pi = -Im(Omega) Q read back as arctan(Im Omega).
template <std::floating_point Scalar>
double ridge_angle(const WignerGrid<Scalar>& g) {
  const ShapeStatistics s = shape_statistics(g);
  return std::atan(-g.big_n * g.frame_scale * g.frame_scale * s.crest_slope);
}

struct ComplexWidth;
class ExactOscillator;

/// Window and resolution for grids built around a Gaussian state.
struct GridSpec {
  Eigen::Index n_points = 512;
  double window_sigmas = 8;
  /// Raise n_points so the narrow (conditional) width spans at least
  /// points_per_sigma samples.
  bool adapt = true;
  double points_per_sigma = 1.5;
  Eigen::Index max_points = 4096;
};

struct GridAxes {
  Eigen::VectorXd q_axis;
  Eigen::VectorXd p_axis;
};

/// Reduced width seen in a frame of scale s: omega / (N s^2).
std::complex<double> frame_width(const ComplexWidth& width, double frame_scale);

/// Axes covering window_sigmas standard deviations of the state in each
/// direction. Throws GridError when adaptation exceeds max_points.
GridAxes grid_axes(std::complex<double> reduced_width, const GridSpec& spec);

WignerGridd wigner(const ComplexWidth& width, const GridSpec& spec, double frame_scale = 1);
WignerGridd wigner(const ExactOscillator& oscillator, double t, const GridSpec& spec, double frame_scale = 1);

}  // namespace ssb
