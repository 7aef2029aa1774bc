#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>

#include "slitwave/intensity.hpp"
#include "slitwave/report.hpp"

namespace slitwave {

/// Physical parameters given explicitly instead of a preset. Geometry and
/// wavelength are required; the rest default to a symmetric, fully
/// coherent double slit.
struct ParameterBlock {
  std::optional<double> width_a_m, length_b_m, thickness_c_m, gap_d_m, screen_L_m;
  std::optional<double> wavelength_m, mass_kg;
  std::optional<double> amplitude_1, amplitude_2;
  std::optional<double> c1, c2, alpha_abs, visibility_nu;
  std::optional<double> weight_tol;

  bool any() const {
    return width_a_m || length_b_m || thickness_c_m || gap_d_m || screen_L_m || wavelength_m ||
           mass_kg || amplitude_1 || amplitude_2 || c1 || c2 || alpha_abs || visibility_nu ||
           weight_tol;
  }
};

struct RunConfig {
  std::optional<std::string> preset;
  ParameterBlock params;
  ScanGrid grid;
  IntensityMode mode = IntensityMode::decohered;
  Normalization normalization = Normalization::peak;
  Truncation truncation;
  std::string out_path;
  std::string svg_path;
  std::string data_path;
  std::string data_unit = "um";
  unsigned threads = 0;  // 0: SLITWAVE_THREADS or hardware concurrency

  /// The preset or the explicit block, never both.
  SlitSetup resolve_setup() const {
    if (preset && params.any()) {
      throw domain_error("config: give either 'preset' or an explicit parameter block, not both");
    }
    if (preset) return SlitSetup::from_preset(make_preset(*preset));
    if (!params.any()) throw domain_error("config: no preset and no parameter block given");

    auto need = [](const std::optional<double>& v, const char* key) {
      if (!v) throw domain_error(std::string("config: parameter block is missing '") + key + "'");
      return *v;
    };
    SlitSetup s;
    s.name = "custom";
    s.geometry.width_a_m = need(params.width_a_m, "a");
    s.geometry.gap_d_m = need(params.gap_d_m, "d");
    s.geometry.screen_L_m = need(params.screen_L_m, "L");
    if (params.length_b_m) s.geometry.length_b_m = *params.length_b_m;
    if (params.thickness_c_m) s.geometry.thickness_c_m = *params.thickness_c_m;
    s.particle.wavelength_m = need(params.wavelength_m, "wavelength");
    s.particle.mass_kg = params.mass_kg;
    if (params.amplitude_1) s.amplitude_1 = *params.amplitude_1;
    if (params.amplitude_2) s.amplitude_2 = *params.amplitude_2;
    if (params.c1) s.coherence.c1 = *params.c1;
    if (params.c2) s.coherence.c2 = *params.c2;
    if (params.alpha_abs && params.visibility_nu) {
      throw domain_error("config: give either 'alpha' or 'nu', not both");
    }
    if (params.alpha_abs) s.coherence.alpha_abs = *params.alpha_abs;
    if (params.visibility_nu) s.coherence.alpha_abs = alpha_from_visibility(*params.visibility_nu);
    if (params.weight_tol) s.weight_tol = *params.weight_tol;
    s.validate();
    return s;
  }
};

inline IntensityMode parse_mode(const std::string& v) {
  if (v == "coherent") return IntensityMode::coherent;
  if (v == "decohered") return IntensityMode::decohered;
  throw domain_error("mode must be 'coherent' or 'decohered'");
}

inline Normalization parse_normalization(const std::string& v) {
  if (v == "none") return Normalization::none;
  if (v == "peak") return Normalization::peak;
  throw domain_error("normalization must be 'none' or 'peak'");
}

/// Applies one `key = value` setting. Lengths are in metres.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto num = [&]() {
    const auto v = detail::parse_double(value);
    if (!v || !std::isfinite(*v)) throw domain_error("expected a finite number, got '" + value + "'");
    return *v;
  };
  auto integer = [&]() {
    const double v = num();
    if (v != std::floor(v) || v < 0 || v > 1e9) {
      throw domain_error("expected a non-negative integer, got '" + value + "'");
    }
    return static_cast<int>(v);
  };
  auto& p = cfg.params;
  if (key == "preset") cfg.preset = value;
  else if (key == "a") p.width_a_m = num();
  else if (key == "b") p.length_b_m = num();
  else if (key == "c") p.thickness_c_m = num();
  else if (key == "d") p.gap_d_m = num();
  else if (key == "L") p.screen_L_m = num();
  else if (key == "wavelength") p.wavelength_m = num();
  else if (key == "mass") p.mass_kg = num();
  else if (key == "A1") p.amplitude_1 = num();
  else if (key == "A2") p.amplitude_2 = num();
  else if (key == "c1") p.c1 = num();
  else if (key == "c2") p.c2 = num();
  else if (key == "alpha") p.alpha_abs = num();
  else if (key == "nu") p.visibility_nu = num();
  else if (key == "weight_tol") p.weight_tol = num();
  else if (key == "range_lo") cfg.grid.s_min = num();
  else if (key == "range_hi") cfg.grid.s_max = num();
  else if (key == "points") cfg.grid.n_points = integer();
  else if (key == "mode") cfg.mode = parse_mode(value);
  else if (key == "normalize") cfg.normalization = parse_normalization(value);
  else if (key == "m_max") cfg.truncation.m_max = integer();
  else if (key == "n_max") cfg.truncation.n_max = integer();
  else if (key == "tail_tol") cfg.truncation.tail_tol = num();
  else if (key == "m_cap") cfg.truncation.m_cap = integer();
  else if (key == "adaptive") {
    if (value == "true") cfg.truncation.adaptive = true;
    else if (value == "false") cfg.truncation.adaptive = false;
    else throw domain_error("expected true or false");
  } else if (key == "threads") cfg.threads = static_cast<unsigned>(integer());
  else if (key == "data_unit") cfg.data_unit = value;
  else throw domain_error("unknown key");
}

/// Reads a flat `key = value` file; '#' starts a comment. Errors name the
/// source, line and key.
inline void apply_config(RunConfig& cfg, std::istream& is, const std::string& source = "config") {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw domain_error(where + ": expected 'key = value'");
    const std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    try {
      apply_setting(cfg, key, value);
    } catch (const domain_error& e) {
      throw domain_error(where + ": key '" + key + "': " + e.what());
    }
  }
}

/// A preset written as an explicit parameter block, loadable with
/// apply_config.
inline std::string format_preset(const ExperimentPreset& p) {
  using detail::format_double;
  std::ostringstream os;
  os << "# " << p.name << ": " << p.description << "\n";
  os << "# Published fit parameters; slit length b and thickness c are defaults.\n";
  os << "# Visibility nu = " << format_double(p.visibility_nu)
     << " sets |alpha_t| = sqrt(nu / (2 - nu)).\n";
  os << "a = " << format_double(p.geometry.width_a_m) << "\n";
  os << "b = " << format_double(p.geometry.length_b_m) << "\n";
  os << "c = " << format_double(p.geometry.thickness_c_m) << "\n";
  os << "d = " << format_double(p.geometry.gap_d_m) << "\n";
  os << "L = " << format_double(p.geometry.screen_L_m) << "\n";
  os << "wavelength = " << format_double(p.particle.wavelength_m) << "\n";
  os << "A1 = " << format_double(p.amplitude_1) << "\n";
  os << "A2 = " << format_double(p.amplitude_2) << "\n";
  os << "c1 = " << format_double(p.coherence.c1) << "\n";
  os << "c2 = " << format_double(p.coherence.c2) << "\n";
  os << "nu = " << format_double(p.visibility_nu) << "\n";
  os << "# published weights satisfy c1^2 + c2^2 = 1 only to rounding\n";
  os << "weight_tol = " << format_double(preset_weight_tol) << "\n";
  return os.str();
}

}  // namespace slitwave
