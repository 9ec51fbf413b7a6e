#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ssb/ai_dynamics.hpp"
#include "ssb/exact_dynamics.hpp"
#include "support/oracles.hpp"

using namespace ssb;

namespace {

Scenario scenario_with(double n, double t0_over_that, double delta = 1e-3) {
  const double t_hat = freeze_out_time(delta);
  return Scenario::make(n, RampSpec::from_t0(delta, t0_over_that * t_hat));
}

// Second moments of the frozen state expanded in the instantaneous basis at
// t_hat and carried adiabatically: level n picks up (n + 1/2) Phi and the
// basis follows omega(t) = sqrt(delta t).
Moments moments_from_level_sum(const Scenario& s, double t, int n_max) {
  const double omega_hat = std::sqrt(s.ramp.field(s.t_hat()));
  const Eigen::VectorXd c = overlap_coefficients(s.omega0(), omega_hat, n_max);
  const double omega = std::sqrt(s.ramp.field(t));
  const double phi = interference_phase(t / s.t_hat());
  double diag = 0, off = 0;
  for (int n = 0; n <= n_max; n += 2) {
    diag += c(n) * c(n) * (2.0 * n + 1.0);
    if (n + 2 <= n_max) off += c(n) * c(n + 2) * std::sqrt((n + 1.0) * (n + 2.0));
  }
  const double big_n = s.big_n;
  return {(diag + 2.0 * off * std::cos(2.0 * phi)) / (2.0 * big_n * omega),
          big_n * omega * (diag - 2.0 * off * std::cos(2.0 * phi)) / 2.0};
}

}  // namespace

TEST_CASE("interference phase vanishes at t_hat") {
  CHECK(interference_phase(1.0) == 0.0);
  CHECK(interference_phase(4.0) == doctest::Approx(14.0 / 3.0));
  const Scenario s = scenario_with(1e4, 1e-2);
  CHECK(dyn_phase(s, 4.0 * s.t_hat(), 2).value == doctest::Approx(2.5 * 14.0 / 3.0));
  CHECK_THROWS_AS(dyn_phase(s, 0.5 * s.t_hat(), 0), std::invalid_argument);
  CHECK_THROWS_AS(dyn_phase(s, 2 * s.t_hat(), -1), std::invalid_argument);
}

TEST_CASE("punctured times match their closed forms") {
  const auto loc = punctured_times(PuncturedKind::Localization, 2, 1.0);
  const auto rev = punctured_times(PuncturedKind::Revival, 2, 1.0);
  // [3 kappa pi / 2 + 3 pi / 4 + 1]^(2/3) and [3 kappa pi / 2 + 1]^(2/3).
  CHECK(loc[0] == doctest::Approx(2.2416342145525494).epsilon(1e-14));
  CHECK(loc[1] == doctest::Approx(4.0228286161674989).epsilon(1e-14));
  CHECK(loc[2] == doctest::Approx(5.4664989097632155).epsilon(1e-14));
  CHECK(rev[0] == 1.0);
  CHECK(rev[1] == doctest::Approx(3.1955467960184016).epsilon(1e-14));
  CHECK(rev[2] == doctest::Approx(4.7721183864450509).epsilon(1e-14));
  const auto scaled = punctured_times(PuncturedKind::Revival, 1, 10.0);
  CHECK(scaled[1] == doctest::Approx(31.955467960184016));
}

TEST_CASE("sin^2 of the interference phase is 1 at localization and 0 at revival") {
  for (int kappa = 0; kappa < 6; ++kappa) {
    const double tl = punctured_times(PuncturedKind::Localization, kappa, 1.0).back();
    const double tr = punctured_times(PuncturedKind::Revival, kappa, 1.0).back();
    CHECK(std::pow(std::sin(interference_phase(tl)), 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(std::sin(interference_phase(tr))) < 1e-12);
  }
}

TEST_CASE("overlap coefficients: closed values, normalization and parity") {
  const Eigen::VectorXd c = overlap_coefficients(1.0, 2.0, 40);
  CHECK(c(0) * c(0) == doctest::Approx(2.0 * std::numbers::sqrt2 / 3.0).epsilon(1e-14));
  CHECK(c.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
  for (int n = 1; n <= 40; n += 2) CHECK(c(n) == 0.0);
  CHECK(overlap_coefficients(1.5, 1.5, 10)(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(overlap_coefficients(1.0, 2.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(overlap_coefficients(0.0, 2.0, 4), std::invalid_argument);
}

TEST_CASE("overlap coefficients agree with quadrature of the basis functions") {
  const double wi = 0.3, wf = 1.7;
  const Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(4001, -20, 20);
  const ComplexWidth initial{1, {wi, 0}, 0, 1};
  const ComplexWidth final_basis{1, {wf, 0}, 0, 1};
  const Eigen::VectorXcd psi0 = wavefunction(initial, 0, q);
  const Eigen::VectorXd c = overlap_coefficients(wi, wf, 12);
  for (int n = 0; n <= 12; ++n) {
    const Eigen::VectorXcd phi = wavefunction(final_basis, n, q);
    const Eigen::VectorXd integrand = (phi.conjugate().array() * psi0.array()).real().matrix();
    // Basis functions carry exp(-i phase/2 ...) with phase 0 here, so they are real.
    CHECK(oracle::trapezoid(integrand, q) == doctest::Approx(c(n)).epsilon(1e-10));
  }
}

TEST_CASE("closed-form moments equal the instantaneous-basis level sum") {
  for (double tau0 : {1e-3, 1e-2, 1e-1}) {
    const Scenario s = scenario_with(1e4, tau0);
    for (double tau : {1.0, 1.3, 2.2416342145525494, 3.0, 5.5, 8.0}) {
      const double t = tau * s.t_hat();
      const Moments m = moments_from_level_sum(s, t, 4000);
      CHECK(1.0 / inv_dq2(s, t) == doctest::Approx(m.dq2).epsilon(1e-10));
      CHECK(1.0 / inv_dpi2(s, t) == doctest::Approx(m.dpi2).epsilon(1e-10));
    }
  }
}

TEST_CASE("uncertainty product is minimal at punctured times and bounded by 1/4 below") {
  const Scenario s = scenario_with(1e4, 1e-3);
  for (int kappa = 0; kappa < 4; ++kappa) {
    for (PuncturedKind kind : {PuncturedKind::Localization, PuncturedKind::Revival}) {
      const double t = punctured_times(kind, kappa, s.t_hat()).back();
      CHECK(uncertainty_product(s, t) == doctest::Approx(0.25).epsilon(1e-10));
    }
  }
  for (int i = 0; i <= 700; ++i) {
    const double t = (1.0 + 0.01 * i) * s.t_hat();
    CHECK(uncertainty_product(s, t) >= 0.25 * (1 - 1e-12));
  }
}

TEST_CASE("localization maximizes the order parameter") {
  const Scenario s = scenario_with(1e4, 1e-2);
  const double t_loc = punctured_times(PuncturedKind::Localization, 1, s.t_hat()).back();
  const double peak = inv_dq2(s, t_loc);
  CHECK(peak == doctest::Approx(2.0 * s.big_n / s.t_hat() * std::sqrt(t_loc / s.t_hat() / 1e-2)));
  CHECK(inv_dq2(s, t_loc * 1.01) < peak);
  CHECK(inv_dq2(s, t_loc * 0.99) < peak);
}

TEST_CASE("frozen values continue into the closed forms at t_hat") {
  const Scenario s = scenario_with(500, 0.05);
  CHECK(frozen_inv_dq2(s) == doctest::Approx(inv_dq2(s, s.t_hat())).epsilon(1e-12));
  CHECK(frozen_inv_dpi2(s) == doctest::Approx(inv_dpi2(s, s.t_hat())).epsilon(1e-12));
  CHECK(frozen_inv_dq2(s) * frozen_inv_dpi2(s) == doctest::Approx(4.0));
}

TEST_CASE("closed forms reject times outside their domain") {
  const Scenario s = scenario_with(1e4, 1e-2);
  CHECK_THROWS_AS(inv_dq2(s, 0.5 * s.t_hat()), std::invalid_argument);
  const Scenario adiabatic = scenario_with(1e4, 10.0);
  CHECK_THROWS_AS(inv_dpi2(adiabatic, 20.0 * adiabatic.t_hat()), std::invalid_argument);
  CHECK_THROWS_AS(Scenario::make(0, RampSpec::from_t0(1, 1)), std::invalid_argument);
}
