#pragma once

// Brute-force reference integration. Nothing here calls into the
// propagation module: the integrands are built directly from the modal
// exit wavefunction and the linearized path-integral kernel, and then
// integrated numerically.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "slitwave/core.hpp"
#include "slitwave/error.hpp"
#include "slitwave/slit_modes.hpp"

namespace slitwave::oracle {

using complex = std::complex<double>;

struct QuadratureSpec {
  double abs_tol = 1e-15;
  double rel_tol = 1e-12;
  int max_subdivisions = 200000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw domain_error("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw domain_error("max_subdivisions must be at least 1");
  }
};

struct QuadratureResult {
  complex value;
  double err_est = 0.0;
  int panels = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule; nodes in
// descending order, Gauss nodes at odd positions.
inline constexpr std::array<double, 11> kronrod_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525883947, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double lo;
  double hi;
  complex value;
  double err;
  double abs_value;  // Kronrod estimate of the integral of |f|

  bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
Panel gauss_kronrod_21(F& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const complex centre = complex(f(mid));
  complex kronrod = kronrod_weights[10] * centre;
  double abs_sum = kronrod_weights[10] * std::abs(centre);
  complex gauss{0.0, 0.0};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kronrod_nodes[j];
    const complex fl = complex(f(mid - dx)), fr = complex(f(mid + dx));
    const complex sum = fl + fr;
    kronrod += kronrod_weights[j] * sum;
    abs_sum += kronrod_weights[j] * (std::abs(fl) + std::abs(fr));
    if (j % 2 == 1) gauss += gauss_weights[j / 2] * sum;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of a real- or complex-valued f over
/// [lo, hi]. `max_frequency` (rad per unit length) is the fastest
/// oscillation in f; the interval is first cut into panels of at most a
/// quarter of that period.
template <class F>
QuadratureResult integrate_1d(F&& f, double lo, double hi, const QuadratureSpec& spec,
                              double max_frequency = 0.0) {
  spec.validate();
  if (!(lo < hi)) throw domain_error("integration needs lo < hi");
  const double len = hi - lo;
  const double period_panels = std::abs(max_frequency) * len / (2.0 * pi) * 4.0;
  const int initial = std::max(1, static_cast<int>(std::ceil(period_panels)));
  if (initial > spec.max_subdivisions) {
    throw convergence_error("oscillation needs more panels than max_subdivisions allows", 0.0);
  }

  std::priority_queue<detail::Panel> panels;
  complex total{0.0, 0.0};
  double err = 0.0;
  for (int i = 0; i < initial; ++i) {
    const double a = lo + len * (static_cast<double>(i) / initial);
    const double b = (i + 1 == initial) ? hi : lo + len * (static_cast<double>(i + 1) / initial);
    detail::Panel p = detail::gauss_kronrod_21(f, a, b);
    total += p.value;
    err += p.err;
    panels.push(p);
  }
  int count = initial;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (count >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "subdivision budget exhausted: estimate " << total << " +/- " << err;
      throw convergence_error(msg.str(), err);
    }
    const detail::Panel worst = panels.top();
    // The largest remaining error is already at rounding level, so
    // splitting further cannot reduce it.
    if (worst.err <= 50.0 * std::numeric_limits<double>::epsilon() * worst.abs_value) break;
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const detail::Panel left = detail::gauss_kronrod_21(f, worst.lo, mid);
    const detail::Panel right = detail::gauss_kronrod_21(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-add panel values from scratch so the running update leaves no drift.
  complex exact{0.0, 0.0};
  double exact_err = 0.0;
  std::vector<detail::Panel> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (const auto& p : all) {
    exact += p.value;
    exact_err += p.err;
  }
  return {exact, exact_err, count};
}

struct Rectangle {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;

  double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
};

/// Iterated adaptive integration of f(x, y) over a rectangle: x inside,
/// y outside. The reported error adds the outer estimate to the worst
/// inner estimate times the y-extent.
template <class F>
QuadratureResult integrate_aperture_2d(F&& f, const Rectangle& rect, const QuadratureSpec& spec,
                                       double frequency_x = 0.0, double frequency_y = 0.0) {
  if (!(rect.x_lo < rect.x_hi) || !(rect.y_lo < rect.y_hi)) {
    throw domain_error("integration rectangle is degenerate");
  }
  QuadratureSpec inner = spec;
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.abs_tol = 0.1 * spec.abs_tol / (rect.y_hi - rect.y_lo);
  double worst_inner = 0.0;
  auto row = [&](double y) {
    const QuadratureResult r = integrate_1d([&](double x) { return complex(f(x, y)); }, rect.x_lo,
                                            rect.x_hi, inner, frequency_x);
    worst_inner = std::max(worst_inner, r.err_est);
    return r.value;
  };
  QuadratureResult out = integrate_1d(row, rect.y_lo, rect.y_hi, spec, frequency_y);
  out.err_est += worst_inner * (rect.y_hi - rect.y_lo);
  return out;
}

/// Truncated modal wavefunction at the slit exit face z = c, evaluated term
/// by term in the cos/sin bracket form with the projection coefficients
/// sin((2m+1) pi d / 2a) and cos((2m+1) pi d / 2a).
class ExitWavefunction {
 public:
  ExitWavefunction(SlitSide side, const SlitGeometry& g, const Particle& p, const Truncation& t,
                   double amplitude)
      : a_(g.width_a_m), b_(g.length_b_m), m_max_(t.m_max), n_max_(t.n_max),
        sign_(side == SlitSide::left ? 1.0 : -1.0) {
    const double k = p.wavenumber();
    coef_.resize(static_cast<std::size_t>(m_max_ + 1) * (n_max_ + 1));
    proj_sin_.resize(m_max_ + 1);
    proj_cos_.resize(m_max_ + 1);
    for (int m = 0; m <= m_max_; ++m) {
      const double hm = 2.0 * m + 1.0;
      proj_sin_[m] = std::sin(hm * pi / (2.0 * a_) * g.gap_d_m);
      proj_cos_[m] = std::cos(hm * pi / (2.0 * a_) * g.gap_d_m);
      for (int n = 0; n <= n_max_; ++n) {
        const double hn = 2.0 * n + 1.0;
        const double kx = hn * pi / b_;
        const double ky = hm * pi / a_;
        const complex kz = std::sqrt(complex(k * k - kx * kx - ky * ky, 0.0));
        const complex carry = std::exp(complex(0.0, 1.0) * kz * g.thickness_c_m);
        coef_[static_cast<std::size_t>(m) * (n_max_ + 1) + n] =
            -16.0 * amplitude / (hm * hn * pi * pi) * carry;
      }
    }
  }

  complex operator()(double x0, double y0) const {
    std::vector<double> sx(n_max_ + 1), cy(m_max_ + 1), sy(m_max_ + 1);
    for (int n = 0; n <= n_max_; ++n) sx[n] = std::sin((2.0 * n + 1.0) * pi * x0 / b_);
    for (int m = 0; m <= m_max_; ++m) {
      const double arg = (2.0 * m + 1.0) * pi * y0 / a_;
      cy[m] = std::cos(arg);
      sy[m] = std::sin(arg);
    }
    complex sum{0.0, 0.0};
    for (int m = 0; m <= m_max_; ++m) {
      const double bracket = proj_sin_[m] * cy[m] + sign_ * proj_cos_[m] * sy[m];
      complex inner{0.0, 0.0};
      for (int n = 0; n <= n_max_; ++n) {
        inner += coef_[static_cast<std::size_t>(m) * (n_max_ + 1) + n] * sx[n];
      }
      sum += bracket * inner;
    }
    return sum;
  }

 private:
  double a_;
  double b_;
  int m_max_;
  int n_max_;
  double sign_;
  std::vector<double> proj_sin_;
  std::vector<double> proj_cos_;
  std::vector<complex> coef_;
};

/// Aperture rectangle of one slit, from the geometry directly.
inline Rectangle slit_rectangle(SlitSide side, const SlitGeometry& g) {
  if (side == SlitSide::left) {
    return {0.0, g.length_b_m, -g.gap_d_m / 2.0 - g.width_a_m, -g.gap_d_m / 2.0};
  }
  return {0.0, g.length_b_m, g.gap_d_m / 2.0, g.gap_d_m / 2.0 + g.width_a_m};
}

/// Slit amplitude at a screen point by direct numerical integration of
/// kernel x exit wavefunction over the aperture. The kernel is
/// [k / (2 pi i r)]^{3/2} exp(i k R^2 / 2r) with the linearized
/// R^2 = r^2 - 2 r sin(alpha) x0 - 2 r sin(beta) y0 - 2 r cos(theta) c; its
/// r^2 and c terms do not depend on (x0, y0) and are applied outside the
/// integral so the large common phase k r / 2 is not mixed into the
/// integrand.
inline QuadratureResult amplitude_by_quadrature(SlitSide side, const ScreenPoint& pt,
                                                const SlitGeometry& g, const Particle& p,
                                                const Truncation& t, double amplitude,
                                                const QuadratureSpec& spec) {
  g.validate();
  p.validate();
  const double k = p.wavenumber();
  const ExitWavefunction psi(side, g, p, t, amplitude);
  const double kx = k * pt.sin_alpha;
  const double ky = k * pt.sin_beta;
  auto integrand = [&](double x0, double y0) {
    return std::exp(complex(0.0, -(kx * x0 + ky * y0))) * psi(x0, y0);
  };
  const Rectangle rect = slit_rectangle(side, g);
  const double fx = (2.0 * t.n_max + 1.0) * pi / g.length_b_m + std::abs(kx);
  const double fy = (2.0 * t.m_max + 1.0) * pi / g.width_a_m + std::abs(ky);
  QuadratureResult r = integrate_aperture_2d(integrand, rect, spec, fx, fy);

  const complex norm = std::pow(complex(k / (2.0 * pi * pt.r_m), 0.0) / complex(0.0, 1.0), 1.5);
  const complex common = norm * std::exp(complex(0.0, 0.5 * k * pt.r_m)) *
                         std::exp(complex(0.0, -k * pt.cos_theta * g.thickness_c_m));
  r.value *= common;
  r.err_est *= std::abs(common);
  return r;
}

}  // namespace slitwave::oracle
