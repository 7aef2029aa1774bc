#pragma once

#include <cmath>
#include <numbers>

namespace slitwave::detail {

// sin(pi * x) with exact zeros at integer x.
inline double sin_pi(double x) {
  double r = std::fmod(x, 2.0);  // exact, in (-2, 2)
  if (r < 0.0) r += 2.0;         // [0, 2)
  if (r == 0.0 || r == 1.0) return 0.0;
  double sign = 1.0;
  if (r > 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;  // sin(pi r) = sin(pi (1 - r))
  return sign * std::sin(std::numbers::pi * r);
}

// sin(x)/x, accurate near zero.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace slitwave::detail
