#include <doctest.h>

#include <cmath>

#include "ssb/kibble_zurek.hpp"

using namespace ssb;

TEST_CASE("freeze-out time is the fixed point of the relaxation time") {
  for (double delta : {1e-6, 1e-3, 0.5, 1.0, 7.0}) {
    const double t_hat = freeze_out_time(delta);
    CHECK(relaxation_time(delta, t_hat) == doctest::Approx(t_hat).epsilon(1e-14));
  }
  CHECK(freeze_out_time(1e-3) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(freeze_out_time(1.0) == 1.0);
}

TEST_CASE("relaxation time falls as t^(-1/2)") {
  const double delta = 0.01;
  CHECK(relaxation_time(delta, 4.0) / relaxation_time(delta, 16.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(relaxation_time(delta, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(relaxation_time(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("adiabaticity bound is b0^(3/2)") {
  CHECK(adiabaticity_bound(4.0) == doctest::Approx(8.0));
  CHECK(adiabaticity_bound(1e-2f) == doctest::Approx(1e-3f));
  // A ramp started at b0 with delta below the bound starts after t_hat.
  const double b0 = 0.3;
  const double delta = 0.5 * adiabaticity_bound(b0);
  const RampSpec ramp = RampSpec::from_b0(delta, b0);
  CHECK(ramp.t0() > ramp.t_hat());
}

TEST_CASE("ramp parameterizations agree") {
  const RampSpec a = RampSpec::from_t0(1e-3, 0.01);
  const RampSpec b = RampSpec::from_b0(1e-3, 1e-5);
  CHECK(a.b0() == doctest::Approx(1e-5));
  CHECK(b.t0() == doctest::Approx(0.01));
  CHECK(a.field(20.0) == doctest::Approx(0.02));
  CHECK_THROWS_AS(RampSpec::from_t0(1e-3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(RampSpec::from_b0(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("regime classification around t_hat") {
  const RampSpec ramp = RampSpec::from_t0(1e-3, 0.01);
  CHECK(classify_regime(ramp, 5.0) == Regime::Impulse);
  CHECK(classify_regime(ramp, 10.0) == Regime::FreezeOut);
  CHECK(classify_regime(ramp, 20.0) == Regime::Adiabatic);
  CHECK(classify_regime(ramp, 10.5, 0.1) == Regime::FreezeOut);
  CHECK_THROWS_AS(classify_regime(ramp, 0.001), std::invalid_argument);
  CHECK(to_string(Regime::FreezeOut) == "FreezeOut");
}
