#include "ssb/airy.hpp"

#include <cmath>
#include <numbers>

namespace ssb {

namespace {

constexpr double kAi0 = 0.355028053887817239260;   // Ai(0)
constexpr double kAiP0 = 0.258819403792806798405;  // -Ai'(0)
constexpr double kSeriesRadius = 2.0;

AiryValues airy_series(double x) {
  const double x3 = x * x * x;
  // f = sum t_k, g = sum s_k and their derivatives (DLMF 9.4.1-9.4.4).
  double f = 1.0, df = 0.0, g = x, dg = 1.0;
  double t = 1.0, s = x, u = x * x / 2.0, v = 1.0;
  df = u;
  for (int k = 1; k < 60; ++k) {
    t *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
    s *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
    v *= x3 / ((3.0 * k - 2.0) * (3.0 * k));
    if (k > 1) u *= x3 / ((3.0 * k - 3.0) * (3.0 * k - 1.0));
    f += t;
    g += s;
    dg += v;
    if (k > 1) df += u;
    if (std::abs(t) + std::abs(s) + std::abs(u) + std::abs(v) < 1e-18 * (std::abs(f) + std::abs(g))) break;
  }
  const double sqrt3 = std::numbers::sqrt3;
  return {kAi0 * f - kAiP0 * g, kAi0 * df - kAiP0 * dg, sqrt3 * (kAi0 * f + kAiP0 * g),
          sqrt3 * (kAi0 * df + kAiP0 * dg)};
}

// J_{-nu} from J_nu and Y_nu for non-integer nu.
double bessel_j_negative(double nu, double z) {
  const double a = nu * std::numbers::pi;
  return std::cos(a) * std::cyl_bessel_j(nu, z) - std::sin(a) * std::cyl_neumann(nu, z);
}

// I_{-nu} = I_nu + (2/pi) sin(nu pi) K_nu.
double bessel_i_negative(double nu, double z) {
  return std::cyl_bessel_i(nu, z) + 2.0 / std::numbers::pi * std::sin(nu * std::numbers::pi) * std::cyl_bessel_k(nu, z);
}

AiryValues airy_oscillatory(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const double j13 = std::cyl_bessel_j(1.0 / 3.0, zeta);
  const double jm13 = bessel_j_negative(1.0 / 3.0, zeta);
  const double j23 = std::cyl_bessel_j(2.0 / 3.0, zeta);
  const double jm23 = bessel_j_negative(2.0 / 3.0, zeta);
  const double sqrt3 = std::numbers::sqrt3;
  return {std::sqrt(z) / 3.0 * (j13 + jm13), z / 3.0 * (j23 - jm23), std::sqrt(z / 3.0) * (jm13 - j13),
          z / sqrt3 * (jm23 + j23)};
}

AiryValues airy_monotone(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double sqrt3 = std::numbers::sqrt3;
  const double pi = std::numbers::pi;
  const double k13 = std::cyl_bessel_k(1.0 / 3.0, zeta);
  const double k23 = std::cyl_bessel_k(2.0 / 3.0, zeta);
  return {std::sqrt(x / 3.0) * k13 / pi, -x / (pi * sqrt3) * k23,
          std::sqrt(x / 3.0) * (bessel_i_negative(1.0 / 3.0, zeta) + std::cyl_bessel_i(1.0 / 3.0, zeta)),
          x / sqrt3 * (bessel_i_negative(2.0 / 3.0, zeta) + std::cyl_bessel_i(2.0 / 3.0, zeta))};
}

}  // namespace

AiryValues airy(double x) {
  if (std::abs(x) <= kSeriesRadius) return airy_series(x);
  return x < 0 ? airy_oscillatory(x) : airy_monotone(x);
}

}  // namespace ssb
