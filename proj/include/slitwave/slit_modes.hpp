#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "slitwave/core.hpp"
#include "slitwave/detail/summation.hpp"
#include "slitwave/detail/trig.hpp"

namespace slitwave {

/// Mode (m, n) of the rectangular slit well. Only odd harmonics survive
/// the projection of a constant incoming wave, so the physical harmonic
/// numbers are 2m + 1 (across the width, y) and 2n + 1 (along the length, x).
struct ModeIndex {
  int m = 0;
  int n = 0;

  int harmonic_y() const { return 2 * m + 1; }
  int harmonic_x() const { return 2 * n + 1; }
};

/// Mode-sum truncation. Sums run over 0 <= m <= m_max and 0 <= n <= n_max.
/// A screen scan doubles m_max until the normalized pattern changes by less
/// than tail_tol, up to m_cap.
struct Truncation {
  int m_max = 512;
  int n_max = 64;
  double tail_tol = 1e-4;
  int m_cap = 16384;
  bool adaptive = true;

  void validate() const {
    if (m_max < 1 || n_max < 1) throw domain_error("m_max and n_max must be at least 1");
    if (!(tail_tol > 0.0)) throw domain_error("tail_tol must be positive");
    if (m_cap < m_max) throw domain_error("m_cap must not be below m_max");
  }
};

enum class SlitSide { left, right };

inline const char* to_string(SlitSide side) {
  return side == SlitSide::left ? "left" : "right";
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// y-extent of a slit aperture.
inline Interval aperture(SlitSide side, const SlitGeometry& g) {
  const double half_gap = 0.5 * g.gap_d_m;
  if (side == SlitSide::left) return {-half_gap - g.width_a_m, -half_gap};
  return {half_gap, half_gap + g.width_a_m};
}

/// Sign between the cosine and sine bracket terms: + left, - right.
inline double bracket_sign(SlitSide side) { return side == SlitSide::left ? 1.0 : -1.0; }

/// Projection coefficients of the incoming amplitude onto
/// sin((2n+1) pi x / b) cos((2m+1) pi y / a)  (cos_term) and
/// sin((2n+1) pi x / b) sin((2m+1) pi y / a)  (sin_term), left slit.
/// The right slit uses the same values with the sine term negated.
struct ModeCoefficients {
  double cos_term = 0.0;
  double sin_term = 0.0;
};

inline double mode_weight(ModeIndex mn, double amplitude) {
  return -16.0 * amplitude /
         (static_cast<double>(mn.harmonic_y()) * mn.harmonic_x() * pi * pi);
}

inline ModeCoefficients mode_coefficients(ModeIndex mn, const SlitGeometry& g,
                                          double amplitude) {
  const double w = mode_weight(mn, amplitude);
  const double phase = mn.harmonic_y() * pi * g.gap_d_m / (2.0 * g.width_a_m);
  return {w * std::sin(phase), w * std::cos(phase)};
}

/// Longitudinal wavenumber sqrt(k^2 - qx^2 - qy^2). Negative radicands give
/// the decaying branch (imaginary part >= 0).
inline std::complex<double> longitudinal_wavenumber(ModeIndex mn, const SlitGeometry& g,
                                                    const Particle& p) {
  const double k = p.wavenumber();
  const double qx = mn.harmonic_x() * pi / g.length_b_m;
  const double qy = mn.harmonic_y() * pi / g.width_a_m;
  // (k - q)(k + q) form keeps precision when k >> q.
  const double radicand = (k - qy) * (k + qy) - qx * qx;
  if (radicand >= 0.0) return {std::sqrt(radicand), 0.0};
  return {0.0, std::sqrt(-radicand)};
}

inline std::complex<double> longitudinal_factor_at(ModeIndex mn, const SlitGeometry& g,
                                                   const Particle& p, double z) {
  if (z == 0.0) return {1.0, 0.0};
  const std::complex<double> kz = longitudinal_wavenumber(mn, g, p);
  return std::exp(std::complex<double>(0.0, 1.0) * kz * z);
}

/// exp(i kz c): phase (or decay) accumulated by the mode across the slit.
inline std::complex<double> longitudinal_factor(ModeIndex mn, const SlitGeometry& g,
                                                const Particle& p) {
  return longitudinal_factor_at(mn, g, p, g.thickness_c_m);
}

namespace detail {

// Transverse profile of mode m across the aperture. Both bracket forms
// reduce to sin((2m+1) pi (y + d/2) / a) on the left and
// sin((2m+1) pi (d/2 - y) / a) on the right, i.e. to
// -sin((2m+1) pi (y - lo) / a) = sin((2m+1) pi (y - hi) / a) on either
// side. The offset is taken from the nearer wall so both walls are exact
// zeros.
inline double transverse_profile(int harmonic, double y, const Interval& ap, double a) {
  const double from_lo = y - ap.lo;
  const double from_hi = y - ap.hi;
  if (std::abs(from_lo) <= std::abs(from_hi)) return -sin_pi(harmonic * (from_lo / a));
  return sin_pi(harmonic * (from_hi / a));
}

}  // namespace detail

/// Truncated modal wavefunction inside one slit at (x, y, z).
inline std::complex<double> in_slit_wavefunction(double x, double y, double z, SlitSide side,
                                                 const SlitGeometry& g, const Particle& p,
                                                 const Truncation& trunc, double amplitude) {
  g.validate();
  p.validate();
  trunc.validate();
  const Interval ap = aperture(side, g);
  if (!(x >= 0.0 && x <= g.length_b_m) || !(y >= ap.lo && y <= ap.hi)) {
    throw domain_error(std::string("point lies outside the ") + to_string(side) +
                       " slit aperture");
  }
  if (!(z >= 0.0 && z <= g.thickness_c_m)) {
    throw domain_error("z must lie within the slit thickness [0, c]");
  }
  detail::compensated_complex_sum acc;
  for (int m = 0; m <= trunc.m_max; ++m) {
    const int hy = 2 * m + 1;
    const double ty = detail::transverse_profile(hy, y, ap, g.width_a_m);
    for (int n = 0; n <= trunc.n_max; ++n) {
      const ModeIndex mn{m, n};
      const double tx = detail::sin_pi(mn.harmonic_x() * (x / g.length_b_m));
      const double w = mode_weight(mn, amplitude) * tx * ty;
      if (w == 0.0) continue;
      acc.add(w * longitudinal_factor_at(mn, g, p, z));
    }
  }
  return acc.value();
}

}  // namespace slitwave
