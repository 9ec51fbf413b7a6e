#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "ssb/airy.hpp"

using ssb::airy;
using ssb::AiryValues;

namespace {

struct Reference {
  double x;
  AiryValues v;
};

// 40-digit arbitrary-precision evaluations, rounded to double.
constexpr Reference kReference[] = {
    {-1500.0, {0.079289427752580938, -1.7022995797750002, 0.043953527356831661, 3.0708736578906817}},
    {-500.0, {0.072590120104041145, 2.1173370928026483, -0.094688570132991021, 1.6231170882193451}},
    {-37.5, {0.013668155455244661, 1.3937345616095673, -0.2275803468485782, 0.08218308911633293}},
    {-10.0, {0.04024123848644319, 0.99626504413279005, -0.31467982964383862, 0.11941411339990923}},
    {-2.5, {-0.11232506769296609, 0.67885273426479431, -0.43242247184070531, -0.2204201548746296}},
    {-2.0, {0.22740742820168558, 0.61825902074169103, -0.41230258795639851, 0.27879516692116951}},
    {-1.0, {0.53556088329235207, -0.01016056711664521, 0.10399738949694461, 0.5923756264227924}},
    {0.0, {0.35502805388781722, -0.25881940379280682, 0.61492662744600068, 0.44828835735382638}},
    {0.5, {0.23169360648083348, -0.22491053266468389, 0.85427704310315544, 0.5445725641405923}},
    {2.0, {0.034924130423274378, -0.053090384433653631, 3.2980949999782148, 4.1006820499328898}},
    {2.5, {0.015725923380470491, -0.026250881035903232, 6.4816607384605787, 9.4214233173343018}},
    {5.0, {0.00010834442813607442, -0.00024741389086846248, 657.79204417117114, 1435.8190802179824}},
    {10.0, {1.1047532552898686e-10, -3.5206336767389237e-10, 455641153.54822516, 1429236134.4828658}},
};

// Error scale: on the oscillatory side the local amplitude |x|^(-1/4)/sqrt(pi)
// (|x|^(1/4)/sqrt(pi) for derivatives), so zeros do not inflate relative errors.
double scale(double x, double value, bool derivative) {
  if (x >= 0) return std::abs(value);
  const double amp = std::pow(1.0 - x, derivative ? 0.25 : -0.25) / std::sqrt(std::numbers::pi);
  return std::max(std::abs(value), amp);
}

}  // namespace

TEST_CASE("Airy functions match high-precision references") {
  for (const Reference& r : kReference) {
    CAPTURE(r.x);
    const AiryValues v = airy(r.x);
    const double tol = std::abs(r.x) > 100 ? 1e-11 : 1e-13;
    CHECK(std::abs(v.ai - r.v.ai) <= tol * scale(r.x, r.v.ai, false));
    CHECK(std::abs(v.ai_prime - r.v.ai_prime) <= tol * scale(r.x, r.v.ai_prime, true));
    CHECK(std::abs(v.bi - r.v.bi) <= tol * scale(r.x, r.v.bi, false));
    CHECK(std::abs(v.bi_prime - r.v.bi_prime) <= tol * scale(r.x, r.v.bi_prime, true));
  }
}

TEST_CASE("Wronskian Ai Bi' - Ai' Bi = 1/pi across branches") {
  for (double x = -1800.0; x <= 8.0; x += 0.37) {
    CAPTURE(x);
    const AiryValues v = airy(x);
    const double w = v.ai * v.bi_prime - v.ai_prime * v.bi;
    const double scale = std::abs(v.ai * v.bi_prime) + std::abs(v.ai_prime * v.bi);
    CHECK(std::abs(w - 1.0 / std::numbers::pi) <= 1e-12 * std::max(scale, 1.0 / std::numbers::pi));
  }
}

TEST_CASE("series and Bessel branches join continuously at |x| = 2") {
  for (double x : {-2.0, 2.0}) {
    const AiryValues in = airy(x);
    const AiryValues out = airy(x + (x < 0 ? -1e-12 : 1e-12));
    CHECK(in.ai == doctest::Approx(out.ai).epsilon(1e-10));
    CHECK(in.bi == doctest::Approx(out.bi).epsilon(1e-10));
    CHECK(in.ai_prime == doctest::Approx(out.ai_prime).epsilon(1e-10));
    CHECK(in.bi_prime == doctest::Approx(out.bi_prime).epsilon(1e-10));
  }
}

TEST_CASE("Airy equation holds by finite differences") {
  for (double x : {-30.0, -3.1, -0.4, 1.2, 3.3}) {
    const double h = 1e-4;
    const double d2 = (airy(x + h).ai - 2 * airy(x).ai + airy(x - h).ai) / (h * h);
    CHECK(d2 == doctest::Approx(x * airy(x).ai).epsilon(1e-5));
  }
}
