#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ssb/exact_dynamics.hpp"
#include "ssb/splitstep.hpp"

using namespace ssb;

namespace {

// Box holding 10 position and momentum standard deviations over the whole
// evolution, power-of-two sized.
Eigen::VectorXd box_for(const Scenario& s, double t_final) {
  const ExactOscillator osc(s);
  double sq = 0, sp = 0;
  for (int i = 0; i <= 400; ++i) {
    const double t = s.ramp.t0() + (t_final - s.ramp.t0()) * i / 400.0;
    const Moments m = osc.moments(t);
    sq = std::max(sq, std::sqrt(m.dq2));
    sp = std::max(sp, std::sqrt(m.dpi2));
  }
  const double half = 10 * sq;
  const double dq_max = std::numbers::pi / (10 * sp);
  Eigen::Index n = 64;
  while (2 * half / static_cast<double>(n) > dq_max) n *= 2;
  return Eigen::VectorXd::LinSpaced(n, -half, half);
}

}  // namespace

TEST_CASE("static oscillator: ground state is stationary over a period") {
  const double big_n = 3, b = 0.64;
  const Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(256, -6, 6);
  const ComplexWidth ground{0, {big_n * std::sqrt(b), 0}, 0, big_n};
  const Eigen::VectorXcd psi0 = wavefunction(ground, 0, q);
  const double period = 2 * std::numbers::pi / std::sqrt(b);
  const Eigen::VectorXcd psi = splitstep_propagate(psi0, q, big_n, [b](double) { return b; }, 0, period, 1e-3);
  CHECK(fidelity(psi, psi0, q) >= 1 - 1e-8);
  CHECK(grid_norm(psi, q) == doctest::Approx(grid_norm(psi0, q)).epsilon(1e-10));
  // Over one period the global phase is e^{-i pi}.
  CHECK(l2_distance(psi, -psi0, q) < 1e-6);
}

TEST_CASE("ramped evolution matches the closed-form ground wavefunction") {
  const Scenario s = Scenario::make(1, RampSpec::from_t0(1.0, 0.01));
  const double t_final = 5.0;
  const Eigen::VectorXd q = box_for(s, t_final);
  const double dt = splitstep_max_dt(s, t_final);
  const Eigen::VectorXcd psi = splitstep_evolve(s, q, t_final, dt);
  const Eigen::VectorXcd exact = wavefunction(width_param(s, t_final), 0, q);
  CHECK(fidelity(psi, exact, q) >= 1 - 1e-6);
  CHECK(std::abs(grid_norm(psi, q) - grid_norm(wavefunction(width_param(s, s.ramp.t0()), 0, q), q)) <= 1e-10);
  // Phase included: the quantal phase convention is checked as well.
  CHECK(l2_distance(psi, exact, q) < 1e-3);
}

TEST_CASE("Strang splitting converges at second order") {
  const Scenario s = Scenario::make(1, RampSpec::from_t0(1.0, 0.01));
  const double t_final = 3.0;
  const Eigen::VectorXd q = box_for(s, t_final);
  const Eigen::VectorXcd exact = wavefunction(width_param(s, t_final), 0, q);
  const double dt = splitstep_max_dt(s, t_final);
  const double e1 = l2_distance(splitstep_evolve(s, q, t_final, dt), exact, q);
  const double e2 = l2_distance(splitstep_evolve(s, q, t_final, dt / 2), exact, q);
  const double e3 = l2_distance(splitstep_evolve(s, q, t_final, dt / 4), exact, q);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("split-step guards") {
  const Scenario s = Scenario::make(1, RampSpec::from_t0(1.0, 0.01));
  const Eigen::VectorXd q = box_for(s, 5.0);
  CHECK_THROWS_AS(splitstep_evolve(s, q, 5.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(splitstep_evolve(s, q, 0.001, 1e-4), std::invalid_argument);
  // A box only a few initial widths wide: the spreading packet reaches the edge.
  const Eigen::VectorXd narrow = Eigen::VectorXd::LinSpaced(256, -15, 15);
  CHECK_THROWS_AS(splitstep_evolve(s, narrow, 5.0, 4e-3), AliasingError);
  Eigen::VectorXd ragged = q;
  ragged(3) += 1e-3;
  CHECK_THROWS_AS(splitstep_evolve(s, ragged, 1.0, 1e-3), std::invalid_argument);
}
