#pragma once

namespace ssb {

struct AiryValues {
  double ai;
  double ai_prime;
  double bi;
  double bi_prime;
};

/// |x| beyond which airy() is not trusted; callers fall back to ODE integration.
inline constexpr double kAiryReliableArgument = 2000.0;

/// Ai, Ai', Bi, Bi' at real x. Maclaurin series near the origin, Bessel-function
/// representations elsewhere. Bi overflows for x above roughly 100.
AiryValues airy(double x);

}  // namespace ssb
