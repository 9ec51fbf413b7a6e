#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "ssb/exact_dynamics.hpp"
#include "ssb/tomography.hpp"
#include "support/oracles.hpp"

using namespace ssb;

namespace {

Scenario scenario_with(double t0_over_that) {
  return Scenario::make(1e4, RampSpec::from_t0(1e-3, t0_over_that * freeze_out_time(1e-3)));
}

WignerGridd grid_at(const Scenario& s, double tau, Eigen::Index points = 128) {
  GridSpec spec;
  spec.n_points = points;
  const ExactOscillator osc(s);
  return wigner(ComplexWidth{tau * s.t_hat(), osc.omega(tau * s.t_hat()), 0.0, s.big_n}, spec,
                std::sqrt(s.omega0()));
}

// Gaussian marginal at angle theta of a Wigner function with the given
// covariance, written out directly.
double rotated_pdf(const GaussianCovariance& c, double theta, double x) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double var = ct * ct * c.qq + 2 * ct * st * c.qp + st * st * c.pp;
  return oracle::gaussian_pdf(x, var);
}

}  // namespace

TEST_CASE("axis marginals of the initial grid") {
  const Scenario s = scenario_with(0.1);
  const WignerGridd g = grid_at(s, 0.1, 257);
  const Eigen::VectorXd pq = marginal(g, 0.0, g.q_axis);
  const Eigen::VectorXd direct = q_marginal(g);
  CHECK((pq - direct).cwiseAbs().maxCoeff() <= 1e-5 * direct.maxCoeff());

  ComplexWidth reduced{s.ramp.t0(), {1.0, 0.0}, 0, 1};
  const Eigen::VectorXd rho = wavefunction(reduced, 0, g.q_axis).cwiseAbs2();
  CHECK((pq - rho).cwiseAbs().maxCoeff() <= 1e-5 * rho.maxCoeff());

  const Eigen::VectorXd pp = marginal(g, std::numbers::pi / 2, g.p_axis);
  const Eigen::VectorXd w = trapezoid_weights(g.p_axis);
  const double var = (w.array() * pp.array() * g.p_axis.array().square()).sum();
  CHECK(var == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("isotropic grids project identically at every angle") {
  const Eigen::VectorXd axis = uniform_axis(8.0, 129);
  const WignerGridd g = gaussian_wigner<double>({1.0, 0.0}, axis, axis);
  const Eigen::VectorXd x = uniform_axis(projection_radius(g), 201);
  const QuadratureSet set = marginals(g, uniform_angles(12), x);
  for (Eigen::Index a = 1; a < set.distributions.rows(); ++a) {
    CHECK((set.distributions.row(a) - set.distributions.row(0)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("marginals of sheared grids equal the rotated Gaussian") {
  const Scenario s = scenario_with(0.1);
  for (double tau : {0.1, 0.6, 1.4}) {
    const WignerGridd g = grid_at(s, tau, 192);
    const ComplexWidth width{0, ExactOscillator(s).omega(tau * s.t_hat()), 0, s.big_n};
    const GaussianCovariance c = gaussian_covariance(frame_width(width, g.frame_scale));
    const Eigen::VectorXd x = uniform_axis(projection_radius(g), 301);
    const std::vector<double> angles = uniform_angles(9);
    const QuadratureSet set = marginals(g, angles, x);
    set.validate();
    const Eigen::VectorXd w = trapezoid_weights(x);
    for (std::size_t a = 0; a < angles.size(); ++a) {
      const Eigen::VectorXd row = set.distributions.row(static_cast<Eigen::Index>(a));
      CHECK(w.dot(row) == doctest::Approx(grid_mass(g)).epsilon(1e-3));
      double worst = 0;
      for (Eigen::Index i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(row(i) - rotated_pdf(c, angles[a], x(i))));
      CHECK(worst <= 1e-5);
    }
  }
}

TEST_CASE("marginal rejects unnormalized grids") {
  const Eigen::VectorXd axis = uniform_axis(8.0, 65);
  WignerGridd g = gaussian_wigner<double>({1.0, 0.0}, axis, axis);
  g.values *= 1.05;
  CHECK_THROWS_AS(marginal(g, 0.0, axis), std::invalid_argument);
}

TEST_CASE("sampling is deterministic and separates streams") {
  const Eigen::VectorXd x = uniform_axis(8.0, 161);
  Eigen::VectorXd pdf(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) pdf(i) = oracle::gaussian_pdf(x(i), 1.0);
  const QuadratureSample a = sample_quadrature(pdf, x, 1000, 42);
  const QuadratureSample b = sample_quadrature(pdf, x, 1000, 42);
  const QuadratureSample c = sample_quadrature(pdf, x, 1000, 42, 1);
  const QuadratureSample d = sample_quadrature(pdf, x, 1000, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.values != d.values);

  const QuadratureSample one = sample_quadrature(pdf, x, 1, 7);
  REQUIRE(one.values.size() == 1);
  CHECK(one.values[0] >= x(0));
  CHECK(one.values[0] <= x(x.size() - 1));
  CHECK_THROWS_AS(sample_quadrature(pdf, x, 0, 7), std::invalid_argument);
}

TEST_CASE("sampling converges to the distribution") {
  const Eigen::VectorXd x = uniform_axis(8.0, 161);
  Eigen::VectorXd pdf(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) pdf(i) = oracle::gaussian_pdf(x(i), 1.0);

  const long big = 1'000'000;
  const QuadratureSample many = sample_quadrature(pdf, x, big, 2024);
  const double mean = std::accumulate(many.values.begin(), many.values.end(), 0.0) / big;
  CHECK(std::abs(mean) <= 5.0 / std::sqrt(static_cast<double>(big)));

  // Expected TV of an n-sample histogram is about sum_i sqrt(p_i / (2 pi n)),
  // so the tolerances below hold only for bins of order sigma. Bins 1.5
  // sigma wide give roughly 0.031 and 0.0031.
  const auto tv_for = [](double half_width, Eigen::Index points, long count) {
    const Eigen::VectorXd ax = uniform_axis(half_width, points);
    Eigen::VectorXd p(ax.size());
    for (Eigen::Index i = 0; i < ax.size(); ++i) p(i) = oracle::gaussian_pdf(ax(i), 1.0);
    p /= trapezoid_weights(ax).dot(p);
    return total_variation(sample_quadrature(p, ax, count, 11).histogram, p, ax);
  };
  const double tv3 = tv_for(9.0, 13, 1'000);
  const double tv5 = tv_for(9.0, 13, 100'000);
  CHECK(tv3 <= 0.05);
  CHECK(tv5 <= 0.005);

  // Fine bins: the same statistics, within 1.5x of the expectation.
  const Eigen::VectorXd fine = uniform_axis(8.0, 65);
  const double dx = fine(1) - fine(0);
  for (long n : {1'000L, 100'000L}) {
    double expected = 0;
    for (Eigen::Index i = 0; i < fine.size(); ++i) {
      const double pi = oracle::gaussian_pdf(fine(i), 1.0) * dx;
      expected += std::sqrt(pi * (1 - pi) / (2 * std::numbers::pi * static_cast<double>(n)));
    }
    const double tv = tv_for(8.0, 65, n);
    CHECK(tv <= 1.5 * expected);
    CHECK(tv >= expected / 1.5);
  }
}

TEST_CASE("back-projection of exact marginals") {
  const Scenario s = scenario_with(0.1);
  const WignerGridd ref = grid_at(s, 0.1);
  const Eigen::VectorXd x = uniform_axis(projection_radius(ref), 1025);

  double previous = std::numeric_limits<double>::infinity();
  for (int n : {16, 45, 90, 180}) {
    const ReconstructionReport r = reconstruct(marginals(ref, uniform_angles(n), x), ref);
    REQUIRE(r.l2_error);
    CHECK(*r.l2_error <= previous);
    CHECK(*r.sup_error >= 0);
    CHECK(r.angles_used == n);
    CHECK_FALSE(r.sparse_coverage);
    previous = *r.l2_error;
  }
  CHECK(previous <= 1e-2);

  const ReconstructionReport hann = reconstruct(marginals(ref, uniform_angles(180), x), ref, {FilterKind::Hann, 1.0});
  CHECK(*hann.l2_error <= 5e-2);
  CHECK(hann.filter.kind == FilterKind::Hann);
}

TEST_CASE("two angles flag sparse coverage") {
  const Scenario s = scenario_with(0.1);
  const WignerGridd ref = grid_at(s, 0.1);
  const Eigen::VectorXd x = uniform_axis(projection_radius(ref), 1025);
  const ReconstructionReport dense = reconstruct(marginals(ref, uniform_angles(180), x), ref);
  const ReconstructionReport sparse = reconstruct(marginals(ref, {0.0, std::numbers::pi / 2}, x), ref);
  CHECK(sparse.sparse_coverage);
  CHECK_FALSE(sparse.warnings.empty());
  CHECK(*sparse.l2_error > 10 * *dense.l2_error);
  CHECK_THROWS_AS(reconstruct(marginals(ref, {0.0}, x), ref), std::invalid_argument);
}

TEST_CASE("sampled marginals reconstruct with statistical noise") {
  const Scenario s = scenario_with(0.1);
  const WignerGridd ref = grid_at(s, 0.1);
  const Eigen::VectorXd x = uniform_axis(projection_radius(ref), 65);
  const QuadratureSet exact = marginals(ref, uniform_angles(90), x);
  const QuadratureSet noisy_a = sample_set(exact, 100'000, 5);
  const QuadratureSet noisy_b = sample_set(exact, 100'000, 5);
  CHECK(noisy_a.distributions == noisy_b.distributions);
  CHECK(noisy_a.sample_counts.front() == 100'000);
  const double e_exact = *reconstruct(exact, ref).l2_error;
  const double e_noisy = *reconstruct(noisy_a, ref).l2_error;
  CHECK(e_noisy > e_exact);
  // Same 65-bin axis for both, so the gap is the sampling noise alone.
  CHECK(e_noisy <= 3 * e_exact);
}

TEST_CASE("quadrature set validation") {
  QuadratureSet q;
  q.angles = {0.5, 0.2};
  q.x_axis = uniform_axis(4.0, 9);
  q.distributions = Eigen::MatrixXd::Zero(2, 9);
  q.sample_counts = {0, 0};
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  CHECK_THROWS_AS(filter_from_string("shepp"), std::invalid_argument);
  CHECK(filter_from_string(to_string(FilterKind::Hann)) == FilterKind::Hann);
}

TEST_CASE("angle ladder on chirped states") {
  // Errors fall with the angle count until they reach the floor set by the
  // 128^2 grid and the interpolation in back-projection (~7e-5); on the
  // floor they may wobble by a fraction of a percent.
  const Scenario s = scenario_with(0.1);
  for (double tau : {0.6, 1.4}) {
    const WignerGridd ref = grid_at(s, tau);
    const Eigen::VectorXd x = uniform_axis(projection_radius(ref), 1025);
    std::vector<double> e;
    for (int n : {16, 45, 90, 180}) e.push_back(*reconstruct(marginals(ref, uniform_angles(n), x), ref).l2_error);
    CHECK(e[0] > e[1]);
    CHECK(e[1] > e[2]);
    if (e[2] > 1e-4) {
      CHECK(e[3] < e[2]);
    } else {
      CHECK(std::abs(e[3] - e[2]) <= 1e-2 * e[2]);
    }
    CHECK(e[3] <= 1e-2);
  }
}
