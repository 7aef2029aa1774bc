#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "slitwave/core.hpp"
#include "slitwave/detail/summation.hpp"
#include "slitwave/slit_modes.hpp"

namespace slitwave {

using complex = std::complex<double>;

/// Relative distance from resonance (|freq| = q) below which the exact
/// resonance limit replaces the general closed form.
inline constexpr double resonance_switch = 1e-8;

struct ApertureIntegrals {
  complex ix;
  complex iy_cos;
  complex iy_sin;
};

namespace detail {

// Exact resonance value exp(i kappa mid) * len.
inline complex exp_integral_limit(double kappa, const Interval& iv) {
  return std::polar(1.0, kappa * iv.mid()) * iv.length();
}

// Limit plus its leading correction, len * (1 - (kappa len)^2 / 24).
inline complex exp_integral_series(double kappa, const Interval& iv) {
  const double x = kappa * iv.length();
  return exp_integral_limit(kappa, iv) * (1.0 - x * x / 24.0);
}

// General branch only.
inline complex exp_integral_general(double kappa, const Interval& iv) {
  return std::polar(1.0, kappa * iv.mid()) * (2.0 * std::sin(0.5 * kappa * iv.length()) / kappa);
}

// Integral of exp(i kappa y) over [lo, hi], written as
// exp(i kappa mid) * 2 sin(kappa len / 2) / kappa so there is no
// cancellation for small kappa. Below the switch it takes the kappa -> 0
// limit exp(i kappa mid) * len, carried to second order in kappa len so
// that high modes stay accurate right up to the switch.
inline complex exp_integral(double kappa, const Interval& iv, double q_ref) {
  if (std::abs(kappa) < resonance_switch * q_ref) return exp_integral_series(kappa, iv);
  return exp_integral_general(kappa, iv);
}

}  // namespace detail

/// Integral over [0, b] of exp(-i u x) sin((2n+1) pi x / b) dx.
inline complex axial_integral(int n, double u, double b) {
  const double q = (2 * n + 1) * pi / b;
  const Interval iv{0.0, b};
  const complex plus = detail::exp_integral(q - u, iv, q);
  const complex minus = detail::exp_integral(-q - u, iv, q);
  return (plus - minus) / complex(0.0, 2.0);
}

/// Integrals over [lo, hi] of exp(-i w y) cos(q y) and exp(-i w y) sin(q y),
/// q = (2m+1) pi / a.
inline std::pair<complex, complex> transverse_integrals(int m, double w, const Interval& iv,
                                                        double a) {
  const double q = (2 * m + 1) * pi / a;
  const complex plus = detail::exp_integral(q - w, iv, q);
  const complex minus = detail::exp_integral(-q - w, iv, q);
  return {0.5 * (plus + minus), (plus - minus) / complex(0.0, 2.0)};
}

/// All three aperture integrals for mode (m, n) of one slit, with
/// u = k sin(alpha) and w = k sin(beta).
inline ApertureIntegrals aperture_integrals(ModeIndex mn, double u, double w, SlitSide side,
                                            const SlitGeometry& g) {
  const auto [ic, is] = transverse_integrals(mn.m, w, aperture(side, g), g.width_a_m);
  return {axial_integral(mn.n, u, g.length_b_m), ic, is};
}

/// (1/i)^{3/2} = -sqrt(2)/2 - i sqrt(2)/2.
inline const complex kernel_phase{-std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};

/// Slit-independent factor in front of the mode sum:
/// (1/i)^{3/2} (k / 2 pi r)^{3/2} exp(i k r / 2) exp(-i k cos(theta) c).
inline complex kernel_prefactor(const ScreenPoint& pt, const Particle& p, double c) {
  if (!(pt.r_m > 0.0)) throw domain_error("screen point distance must be positive");
  const double k = p.wavenumber();
  complex value = kernel_phase * std::pow(k / (2.0 * pi * pt.r_m), 1.5) *
                  std::polar(1.0, 0.5 * k * pt.r_m);
  if (c != 0.0) value *= std::polar(1.0, -k * pt.cos_theta * c);
  return value;
}

/// Point-independent mode data for one slit: weights, longitudinal
/// factors and bracket phases. Built once per (geometry, particle,
/// truncation, amplitude) and reused across screen points.
class SlitModeTable {
 public:
  SlitModeTable(SlitSide side, const SlitGeometry& g, const Particle& p, const Truncation& trunc,
                double amplitude)
      : side_(side), geometry_(g), particle_(p), m_max_(trunc.m_max), n_max_(trunc.n_max),
        amplitude_(amplitude), aperture_(aperture(side, g)) {
    g.validate();
    p.validate();
    trunc.validate();
    if (!std::isfinite(amplitude)) throw domain_error("slit amplitude must be finite");
    separable_ = g.thickness_c_m == 0.0;
    const double sign = bracket_sign(side);
    cos_weight_.resize(m_max_ + 1);
    sin_weight_.resize(m_max_ + 1);
    for (int m = 0; m <= m_max_; ++m) {
      const double phase = (2 * m + 1) * pi * g.gap_d_m / (2.0 * g.width_a_m);
      cos_weight_[m] = std::sin(phase);
      sin_weight_[m] = sign * std::cos(phase);
    }
    if (!separable_) {
      longitudinal_.resize(static_cast<std::size_t>(m_max_ + 1) * (n_max_ + 1));
      for (int m = 0; m <= m_max_; ++m) {
        for (int n = 0; n <= n_max_; ++n) {
          longitudinal_[index(m, n)] = longitudinal_factor({m, n}, g, p);
        }
      }
    }
  }

  SlitSide side() const { return side_; }
  double amplitude() const { return amplitude_; }

  /// Mode-summed diffraction amplitude at a screen point.
  complex amplitude_at(const ScreenPoint& pt) const {
    if (amplitude_ == 0.0) return {0.0, 0.0};
    const double k = particle_.wavenumber();
    const double u = k * pt.sin_alpha;
    const double w = k * pt.sin_beta;
    const double a = geometry_.width_a_m;

    std::vector<complex> ix(n_max_ + 1);
    for (int n = 0; n <= n_max_; ++n) {
      ix[n] = axial_integral(n, u, geometry_.length_b_m) / static_cast<double>(2 * n + 1);
    }
    std::vector<complex> ty(m_max_ + 1);
    for (int m = 0; m <= m_max_; ++m) {
      const auto [ic, is] = transverse_integrals(m, w, aperture_, a);
      ty[m] = (cos_weight_[m] * ic + sin_weight_[m] * is) / static_cast<double>(2 * m + 1);
    }

    detail::compensated_complex_sum acc;
    if (separable_) {
      detail::compensated_complex_sum xs;
      for (int n = 0; n <= n_max_; ++n) xs.add(ix[n]);
      const complex x_sum = xs.value();
      for (int m = 0; m <= m_max_; ++m) acc.add(ty[m] * x_sum);
    } else {
      for (int m = 0; m <= m_max_; ++m) {
        for (int n = 0; n <= n_max_; ++n) {
          acc.add(ty[m] * ix[n] * longitudinal_[index(m, n)]);
        }
      }
    }
    const complex prefactor = kernel_prefactor(pt, particle_, geometry_.thickness_c_m);
    return prefactor * (-16.0 * amplitude_ / (pi * pi)) * acc.value();
  }

 private:
  std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(m) * (n_max_ + 1) + n;
  }

  SlitSide side_;
  SlitGeometry geometry_;
  Particle particle_;
  int m_max_;
  int n_max_;
  double amplitude_;
  Interval aperture_;
  bool separable_ = true;
  // Bracket weights multiplying the cosine and sine transverse integrals.
  std::vector<double> cos_weight_;
  std::vector<double> sin_weight_;
  std::vector<complex> longitudinal_;
};

/// Diffraction amplitude of one slit at a screen point, truncated at
/// (trunc.m_max, trunc.n_max).
inline complex diffraction_amplitude(SlitSide side, const ScreenPoint& pt, const SlitGeometry& g,
                                     const Particle& p, const Truncation& trunc,
                                     double amplitude) {
  return SlitModeTable(side, g, p, trunc, amplitude).amplitude_at(pt);
}

}  // namespace slitwave
