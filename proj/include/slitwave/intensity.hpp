#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "slitwave/core.hpp"
#include "slitwave/detail/parallel.hpp"
#include "slitwave/propagation.hpp"

namespace slitwave {

enum class IntensityMode { coherent, decohered };
enum class Normalization { none, peak };

inline const char* to_string(IntensityMode m) {
  return m == IntensityMode::coherent ? "coherent" : "decohered";
}
inline const char* to_string(Normalization n) {
  return n == Normalization::none ? "none" : "peak";
}

/// |c1 psi1 + c2 psi2|^2 written as the sum of the two direct terms and
/// the interference term.
inline double coherent_intensity(complex psi1, complex psi2, const CoherenceConfig& coh) {
  return coh.c1 * coh.c1 * std::norm(psi1) + coh.c2 * coh.c2 * std::norm(psi2) +
         2.0 * coh.c1 * coh.c2 * (std::conj(psi1) * psi2).real();
}

/// Intensity with the interference term damped by the coherence degree
/// Lambda_t and the overall (1 + |alpha_t|^2) factor from the environment.
inline double decohered_intensity(complex psi1, complex psi2, const CoherenceConfig& coh) {
  const double a2 = coh.alpha_abs * coh.alpha_abs;
  const double lambda_t = lambda_from_alpha(coh.alpha_abs);
  return (1.0 + a2) *
         (coh.c1 * coh.c1 * std::norm(psi1) + coh.c2 * coh.c2 * std::norm(psi2) +
          2.0 * coh.c1 * coh.c2 * lambda_t * (std::conj(psi1) * psi2).real());
}

inline double intensity(IntensityMode mode, complex psi1, complex psi2,
                        const CoherenceConfig& coh) {
  return mode == IntensityMode::coherent ? coherent_intensity(psi1, psi2, coh)
                                         : decohered_intensity(psi1, psi2, coh);
}

inline double fringe_visibility(double i_max, double i_min) {
  const double den = i_max + i_min;
  if (!(den > 0.0)) throw domain_error("visibility needs a positive intensity sum");
  return (i_max - i_min) / den;
}

/// Everything the engine needs to compute a pattern: geometry, particle,
/// per-slit amplitudes and coherence.
struct SlitSetup {
  std::string name = "custom";
  SlitGeometry geometry;
  Particle particle;
  double amplitude_1 = 1.0;
  double amplitude_2 = 1.0;
  CoherenceConfig coherence;
  double weight_tol = 1e-12;

  static SlitSetup from_preset(const ExperimentPreset& p) {
    SlitSetup s;
    s.name = p.name;
    s.geometry = p.geometry;
    s.particle = p.particle;
    s.amplitude_1 = p.amplitude_1;
    s.amplitude_2 = p.amplitude_2;
    s.coherence = p.coherence;
    s.weight_tol = preset_weight_tol;
    return s;
  }

  /// Textbook fringe period lambda L / (a + d) at small angles.
  double nominal_fringe() const {
    return particle.wavelength_m * geometry.screen_L_m / geometry.center_separation();
  }

  void validate() const {
    geometry.validate();
    particle.validate();
    coherence.validate(weight_tol);
    if (!std::isfinite(amplitude_1) || !std::isfinite(amplitude_2)) {
      throw domain_error("slit amplitudes must be finite");
    }
  }
};

struct ScanGrid {
  double s_min = -150e-6;
  double s_max = 150e-6;
  int n_points = 1501;

  void validate() const {
    if (!(s_min < s_max)) throw domain_error("scan range needs s_min < s_max");
    if (n_points < 2) throw domain_error("scan needs at least 2 points");
  }

  double spacing() const { return (s_max - s_min) / (n_points - 1); }

  double position(int i) const {
    if (i == n_points - 1) return s_max;
    return s_min + (s_max - s_min) * (static_cast<double>(i) / (n_points - 1));
  }
};

struct PatternPoint {
  double s_m = 0.0;
  double intensity = 0.0;
};

struct PatternMeta {
  std::string preset = "custom";
  int m_max = 0;
  int n_max = 0;
  double tail_estimate = std::numeric_limits<double>::quiet_NaN();
  CoherenceConfig coherence;
  IntensityMode mode = IntensityMode::decohered;
  Normalization normalization = Normalization::peak;
  double nominal_fringe_m = 0.0;  // 0 when unknown
  bool paraxial_warning = false;  // some |s| exceeded 0.01 L
};

struct DiffractionPattern {
  std::vector<PatternPoint> points;
  PatternMeta meta;

  void validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      if (!std::isfinite(p.s_m) || !std::isfinite(p.intensity) || p.intensity < 0.0) {
        throw domain_error("pattern intensities must be finite and non-negative");
      }
      if (i > 0 && !(p.s_m > points[i - 1].s_m)) {
        throw domain_error("pattern positions must be strictly increasing");
      }
    }
  }
};

struct ScanOptions {
  ScanGrid grid;
  IntensityMode mode = IntensityMode::decohered;
  Normalization normalization = Normalization::peak;
  Truncation truncation;
  unsigned workers = 1;
};

/// Per-slit amplitudes on a grid, at a fixed truncation.
struct GridAmplitudes {
  std::vector<complex> left;
  std::vector<complex> right;
};

inline GridAmplitudes grid_amplitudes(const SlitSetup& setup, const ScanGrid& grid,
                                      const Truncation& trunc, unsigned workers) {
  const SlitModeTable left(SlitSide::left, setup.geometry, setup.particle, trunc,
                           setup.amplitude_1);
  const SlitModeTable right(SlitSide::right, setup.geometry, setup.particle, trunc,
                            setup.amplitude_2);
  GridAmplitudes out;
  out.left.resize(grid.n_points);
  out.right.resize(grid.n_points);
  const double L = setup.geometry.screen_L_m;
  detail::parallel_for(static_cast<std::size_t>(grid.n_points), workers, [&](std::size_t i) {
    const ScreenPoint pt = ScreenPoint::at(grid.position(static_cast<int>(i)), L);
    out.left[i] = left.amplitude_at(pt);
    out.right[i] = right.amplitude_at(pt);
  });
  return out;
}

namespace detail {

inline std::vector<double> raw_intensities(const SlitSetup& setup, const ScanOptions& opt,
                                           const Truncation& trunc) {
  const GridAmplitudes amp = grid_amplitudes(setup, opt.grid, trunc, opt.workers);
  std::vector<double> out(amp.left.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = intensity(opt.mode, amp.left[i], amp.right[i], setup.coherence);
    if (!std::isfinite(out[i])) {
      std::ostringstream msg;
      msg << "non-finite intensity at s = " << opt.grid.position(static_cast<int>(i)) << " m";
      throw convergence_error(msg.str(), out[i]);
    }
    out[i] = std::max(out[i], 0.0);
  }
  return out;
}

// Largest pointwise change relative to the pattern peak; `where` receives
// the index of the largest change.
inline double relative_change(const std::vector<double>& prev, const std::vector<double>& next,
                              std::size_t& where) {
  double peak = 0.0;
  for (double v : next) peak = std::max(peak, std::abs(v));
  double worst = 0.0;
  where = 0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double d = std::abs(next[i] - prev[i]);
    if (d > worst) {
      worst = d;
      where = i;
    }
  }
  return peak > 0.0 ? worst / peak : 0.0;
}

}  // namespace detail

/// Intensity pattern along the screen. With adaptive truncation the
/// y-mode count is doubled until the pattern (relative to its peak)
/// changes by less than tail_tol.
inline DiffractionPattern screen_scan(const SlitSetup& setup, const ScanOptions& opt) {
  setup.validate();
  opt.grid.validate();
  opt.truncation.validate();

  Truncation trunc = opt.truncation;
  std::vector<double> values = detail::raw_intensities(setup, opt, trunc);
  double tail = std::numeric_limits<double>::quiet_NaN();
  double worst_s = std::numeric_limits<double>::quiet_NaN();
  while (trunc.adaptive) {
    if (2 * static_cast<long>(trunc.m_max) > trunc.m_cap) {
      std::ostringstream msg;
      msg << "mode sum did not settle below tail_tol = " << trunc.tail_tol
          << " before m_cap = " << trunc.m_cap << "; last change " << tail
          << " at s = " << worst_s << " m";
      throw convergence_error(msg.str(), tail);
    }
    Truncation finer = trunc;
    finer.m_max *= 2;
    std::vector<double> next = detail::raw_intensities(setup, opt, finer);
    std::size_t where = 0;
    tail = detail::relative_change(values, next, where);
    worst_s = opt.grid.position(static_cast<int>(where));
    values = std::move(next);
    trunc = finer;
    if (tail < trunc.tail_tol) break;
  }

  DiffractionPattern pat;
  pat.meta.preset = setup.name;
  pat.meta.m_max = trunc.m_max;
  pat.meta.n_max = trunc.n_max;
  pat.meta.tail_estimate = tail;
  pat.meta.coherence = setup.coherence;
  pat.meta.mode = opt.mode;
  pat.meta.normalization = opt.normalization;
  pat.meta.nominal_fringe_m = setup.nominal_fringe();

  double peak = 0.0;
  for (double v : values) peak = std::max(peak, v);
  const bool rescale = opt.normalization == Normalization::peak && peak > 0.0;
  pat.points.resize(values.size());
  const double L = setup.geometry.screen_L_m;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double s = opt.grid.position(static_cast<int>(i));
    pat.points[i] = {s, rescale ? values[i] / peak : values[i]};
    if (std::abs(s) > 0.01 * L) pat.meta.paraxial_warning = true;
  }
  return pat;
}

namespace detail {

inline bool is_local_min(const std::vector<PatternPoint>& p, std::size_t i) {
  return i > 0 && i + 1 < p.size() && p[i].intensity < p[i - 1].intensity &&
         p[i].intensity <= p[i + 1].intensity;
}

inline bool is_local_max(const std::vector<PatternPoint>& p, std::size_t i) {
  return i > 0 && i + 1 < p.size() && p[i].intensity > p[i - 1].intensity &&
         p[i].intensity >= p[i + 1].intensity;
}

// Vertex of the parabola through three neighbouring samples.
inline double refine_extremum(const std::vector<PatternPoint>& p, std::size_t i) {
  const double y0 = p[i - 1].intensity, y1 = p[i].intensity, y2 = p[i + 1].intensity;
  const double den = y0 - 2.0 * y1 + y2;
  if (den == 0.0) return p[i].s_m;
  const double h = 0.5 * (p[i + 1].s_m - p[i - 1].s_m);
  return p[i].s_m + 0.5 * h * (y0 - y2) / den;
}

inline void check_sampling(const DiffractionPattern& pat) {
  if (pat.points.size() < 3) throw domain_error("pattern too short for fringe analysis");
  const double fringe = pat.meta.nominal_fringe_m;
  if (fringe > 0.0) {
    for (std::size_t i = 1; i < pat.points.size(); ++i) {
      if (pat.points[i].s_m - pat.points[i - 1].s_m > fringe / 20.0 * (1.0 + 1e-9)) {
        throw domain_error("grid spacing must not exceed 1/20 of the fringe period");
      }
    }
  }
}

}  // namespace detail

/// Index of the central maximum: the largest sample within one nominal
/// fringe of s = 0 (the whole pattern when the fringe is unknown). Ties go
/// to smaller s.
inline std::size_t central_maximum_index(const DiffractionPattern& pat) {
  if (pat.points.empty()) throw domain_error("empty pattern");
  const double window = pat.meta.nominal_fringe_m;
  std::size_t best = pat.points.size();
  for (std::size_t i = 0; i < pat.points.size(); ++i) {
    if (window > 0.0 && std::abs(pat.points[i].s_m) >= window) continue;
    if (best == pat.points.size() || pat.points[i].intensity > pat.points[best].intensity) best = i;
  }
  if (best == pat.points.size()) throw domain_error("scan does not cover the central fringe");
  return best;
}

/// Contrast between the central maximum and the first minimum beyond it.
inline double visibility(const DiffractionPattern& pat) {
  detail::check_sampling(pat);
  const std::size_t c = central_maximum_index(pat);
  for (std::size_t i = c + 1; i + 1 < pat.points.size(); ++i) {
    if (detail::is_local_min(pat.points, i)) {
      return fringe_visibility(pat.points[c].intensity, pat.points[i].intensity);
    }
  }
  throw domain_error("no local minimum beyond the central maximum; widen the scan range");
}

/// Distance between the central maximum and the next maximum at larger s,
/// both located to sub-grid precision by parabolic interpolation.
inline double fringe_spacing(const DiffractionPattern& pat) {
  detail::check_sampling(pat);
  const std::size_t c = central_maximum_index(pat);
  if (c == 0 || c + 1 >= pat.points.size()) {
    throw domain_error("central maximum lies on the scan boundary");
  }
  for (std::size_t i = c + 1; i + 1 < pat.points.size(); ++i) {
    if (detail::is_local_max(pat.points, i)) {
      return detail::refine_extremum(pat.points, i) - detail::refine_extremum(pat.points, c);
    }
  }
  throw domain_error("no second maximum beyond the central one; widen the scan range");
}

}  // namespace slitwave
