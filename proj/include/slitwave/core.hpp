#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slitwave/error.hpp"

namespace slitwave {

inline constexpr double pi = std::numbers::pi;

/// Matter wave described by its de Broglie wavelength. All propagation
/// formulas depend on mass and energy only through k, so the mass is kept
/// for reporting.
struct Particle {
  double wavelength_m = 0.0;
  std::optional<double> mass_kg;

  double wavenumber() const { return 2.0 * pi / wavelength_m; }

  void validate() const {
    if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
      throw domain_error("particle wavelength must be positive and finite");
    }
    if (mass_kg && !(*mass_kg > 0.0)) {
      throw domain_error("particle mass must be positive when given");
    }
  }
};

/// Largest (a + d) / L accepted; beyond it the linearized path length
/// used by the propagator is no longer meaningful.
inline constexpr double max_paraxial_ratio = 1e-3;

/// Double slit in an opaque plane. The left slit spans
/// y in [-d/2 - a, -d/2], the right slit y in [d/2, d/2 + a]; both span
/// x in [0, b] and z in [0, c]. The screen sits at distance L.
struct SlitGeometry {
  double width_a_m = 0.0;
  double length_b_m = 10e-6;
  double thickness_c_m = 0.0;
  double gap_d_m = 0.0;
  double screen_L_m = 0.0;

  double center_separation() const { return width_a_m + gap_d_m; }

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(width_a_m) || !finite(length_b_m) || !finite(thickness_c_m) ||
        !finite(gap_d_m) || !finite(screen_L_m)) {
      throw domain_error("slit geometry contains a non-finite value");
    }
    if (!(width_a_m > 0.0)) throw domain_error("slit width a must be positive");
    if (!(length_b_m > 0.0)) throw domain_error("slit length b must be positive");
    if (!(screen_L_m > 0.0)) throw domain_error("screen distance L must be positive");
    if (thickness_c_m < 0.0) throw domain_error("slit thickness c must be non-negative");
    if (gap_d_m < 0.0) throw domain_error("slit gap d must be non-negative");
    if (!(center_separation() / screen_L_m < max_paraxial_ratio)) {
      throw domain_error("(a + d) / L must be below 1e-3 for the far-field propagator");
    }
  }
};

/// Coherence degree from the environment overlap |alpha_t|:
/// 2|alpha|^2 / (1 + |alpha|^2).
inline double lambda_from_alpha(double alpha_abs) {
  if (!(alpha_abs >= 0.0 && alpha_abs <= 1.0)) {
    throw domain_error("|alpha_t| must lie in [0, 1]");
  }
  const double a2 = alpha_abs * alpha_abs;
  return 2.0 * a2 / (1.0 + a2);
}

/// Inverse of lambda_from_alpha, taking the measured visibility as the
/// coherence degree: |alpha_t| = sqrt(nu / (2 - nu)).
inline double alpha_from_visibility(double nu) {
  if (!(nu >= 0.0 && nu <= 1.0)) {
    throw domain_error("visibility must lie in [0, 1]");
  }
  return std::sqrt(nu / (2.0 - nu));
}

/// Superposition weights of the two slit amplitudes and the environment
/// overlap that damps their interference.
struct CoherenceConfig {
  double c1 = std::numbers::sqrt2 / 2.0;
  double c2 = std::numbers::sqrt2 / 2.0;
  double alpha_abs = 1.0;

  double lambda_t() const { return lambda_from_alpha(alpha_abs); }

  double weight_norm() const { return c1 * c1 + c2 * c2; }

  void validate(double weight_tol = 1e-12) const {
    if (!std::isfinite(c1) || !std::isfinite(c2)) {
      throw domain_error("superposition weights must be finite");
    }
    if (std::abs(weight_norm() - 1.0) > weight_tol) {
      throw domain_error("superposition weights must satisfy c1^2 + c2^2 = 1");
    }
    if (!(alpha_abs >= 0.0 && alpha_abs <= 1.0)) {
      throw domain_error("|alpha_t| must lie in [0, 1]");
    }
  }
};

/// Slack allowed on c1^2 + c2^2 for the shipped presets, whose published
/// weights are rounded.
inline constexpr double preset_weight_tol = 1e-4;

inline double sin_beta_from_position(double s_m, double screen_L_m) {
  return s_m / std::hypot(screen_L_m, s_m);
}

/// Point on the screen, parameterized by its transverse coordinate s
/// (along y). The direction angles satisfy
/// cos^2(theta) + sin^2(alpha) + sin^2(beta) = 1.
struct ScreenPoint {
  double s_m = 0.0;
  double r_m = 0.0;
  double sin_beta = 0.0;
  double sin_alpha = 0.0;
  double cos_theta = 1.0;

  static ScreenPoint at(double s_m, double screen_L_m, double sin_alpha = 0.0) {
    if (!(screen_L_m > 0.0)) throw domain_error("screen distance L must be positive");
    ScreenPoint p;
    p.s_m = s_m;
    p.r_m = std::hypot(screen_L_m, s_m);
    p.sin_beta = s_m / p.r_m;
    p.sin_alpha = sin_alpha;
    const double c2 = 1.0 - sin_alpha * sin_alpha - p.sin_beta * p.sin_beta;
    if (!(c2 > 0.0)) throw domain_error("screen direction has no forward component");
    p.cos_theta = std::sqrt(c2);
    return p;
  }
};

struct ExperimentPreset {
  std::string name;
  std::string description;
  SlitGeometry geometry;
  Particle particle;
  double amplitude_1 = 0.0;
  double amplitude_2 = 0.0;
  CoherenceConfig coherence;
  double visibility_nu = 0.0;
};

inline std::vector<std::string> preset_names() { return {"ref18", "ref19"}; }

/// Published fit parameters of the two C60 double-slit experiments. The
/// slit length and thickness are not part of the published set and take
/// the SlitGeometry defaults (b = 10 um, c = 0).
inline ExperimentPreset make_preset(std::string_view name) {
  ExperimentPreset p;
  if (name == "ref18") {
    p.name = "ref18";
    p.description = "C60, a = 47.5 nm, d = 52.5 nm, lambda = 2.4 pm, L = 1.25 m";
    p.geometry.width_a_m = 47.5e-9;
    p.geometry.gap_d_m = 52.5e-9;
    p.geometry.screen_L_m = 1.25;
    p.particle.wavelength_m = 2.4e-12;
    p.amplitude_1 = 1.6e12;
    p.amplitude_2 = 1.7e12;
    p.coherence.c1 = 0.915;
    p.coherence.c2 = 0.40345;
    p.visibility_nu = 0.53;
  } else if (name == "ref19") {
    p.name = "ref19";
    p.description = "C60, a = 42 nm, d = 86 nm, lambda = 4.8 pm, L = 1.25 m";
    p.geometry.width_a_m = 42e-9;
    p.geometry.gap_d_m = 86e-9;
    p.geometry.screen_L_m = 1.25;
    p.particle.wavelength_m = 4.8e-12;
    p.amplitude_1 = 5.35e13;
    p.amplitude_2 = 2.1e13;
    p.coherence.c1 = 0.9075;
    p.coherence.c2 = 0.42;
    p.visibility_nu = 0.88;
  } else {
    throw domain_error("unknown preset '" + std::string(name) +
                       "' (known presets: ref18, ref19)");
  }
  p.coherence.alpha_abs = alpha_from_visibility(p.visibility_nu);
  return p;
}

}  // namespace slitwave
