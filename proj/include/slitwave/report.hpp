#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "slitwave/intensity.hpp"

namespace slitwave {

namespace detail {

// Shortest %g form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (digits == 17 || std::strtod(buf, nullptr) == v || std::isnan(v)) break;
  }
  return buf;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(t, &used);
    if (used != t.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pattern CSV: '#' metadata lines, header `s_um,intensity`, positions in
// micrometres, values with 17 significant digits.

inline void write_pattern_csv(std::ostream& os, const DiffractionPattern& pat) {
  using detail::format_double;
  const auto& m = pat.meta;
  os << "# slitwave diffraction pattern (positions in micrometres)\n";
  os << "# preset=" << m.preset << "\n";
  os << "# mode=" << to_string(m.mode) << "\n";
  os << "# normalization=" << to_string(m.normalization) << "\n";
  os << "# m_max=" << m.m_max << "\n";
  os << "# n_max=" << m.n_max << "\n";
  os << "# tail_estimate=" << format_double(m.tail_estimate) << "\n";
  os << "# c1=" << format_double(m.coherence.c1) << "\n";
  os << "# c2=" << format_double(m.coherence.c2) << "\n";
  os << "# alpha_abs=" << format_double(m.coherence.alpha_abs) << "\n";
  os << "# lambda_t=" << format_double(lambda_from_alpha(m.coherence.alpha_abs)) << "\n";
  os << "# nominal_fringe_um=" << format_double(m.nominal_fringe_m * 1e6) << "\n";
  os << "s_um,intensity\n";
  for (const auto& p : pat.points) {
    os << format_double(p.s_m * 1e6) << ',' << format_double(p.intensity) << '\n';
  }
}

inline DiffractionPattern read_pattern_csv(std::istream& is) {
  DiffractionPattern pat;
  std::map<std::string, std::string> meta;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) {
        meta[detail::trim(t.substr(1, eq - 1))] = detail::trim(t.substr(eq + 1));
      }
      continue;
    }
    if (!header_seen) {
      if (t != "s_um,intensity") {
        throw domain_error("pattern CSV line " + std::to_string(line_no) +
                           ": expected header 's_um,intensity'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = t.find(',');
    const auto s = comma == std::string::npos ? std::nullopt : detail::parse_double(t.substr(0, comma));
    const auto v = comma == std::string::npos ? std::nullopt : detail::parse_double(t.substr(comma + 1));
    if (!s || !v) {
      throw domain_error("pattern CSV line " + std::to_string(line_no) + ": malformed row");
    }
    pat.points.push_back({*s * 1e-6, *v});
  }
  if (!header_seen) throw domain_error("pattern CSV has no 's_um,intensity' header");

  auto num = [&](const char* key) -> std::optional<double> {
    const auto it = meta.find(key);
    return it == meta.end() ? std::nullopt : detail::parse_double(it->second);
  };
  if (meta.count("preset")) pat.meta.preset = meta["preset"];
  if (meta.count("mode")) {
    pat.meta.mode = meta["mode"] == "coherent" ? IntensityMode::coherent : IntensityMode::decohered;
  }
  if (meta.count("normalization")) {
    pat.meta.normalization = meta["normalization"] == "none" ? Normalization::none : Normalization::peak;
  }
  if (auto v = num("m_max")) pat.meta.m_max = static_cast<int>(*v);
  if (auto v = num("n_max")) pat.meta.n_max = static_cast<int>(*v);
  if (auto v = num("tail_estimate")) pat.meta.tail_estimate = *v;
  if (auto v = num("c1")) pat.meta.coherence.c1 = *v;
  if (auto v = num("c2")) pat.meta.coherence.c2 = *v;
  if (auto v = num("alpha_abs")) pat.meta.coherence.alpha_abs = *v;
  if (auto v = num("nominal_fringe_um")) pat.meta.nominal_fringe_m = *v * 1e-6;
  pat.validate();
  return pat;
}

// ---------------------------------------------------------------------------
// Experimental data and model comparison.

struct DataSeries {
  std::vector<double> positions_m;
  std::vector<double> counts;
};

inline constexpr std::size_t min_data_rows = 10;

/// Scale from a unit name to metres.
inline double unit_scale(const std::string& unit) {
  if (unit == "m") return 1.0;
  if (unit == "mm") return 1e-3;
  if (unit == "um") return 1e-6;
  if (unit == "nm") return 1e-9;
  throw domain_error("unknown length unit '" + unit + "' (use m, mm, um or nm)");
}

/// Two-column CSV (position, counts). Lines starting with '#' and a
/// non-numeric first row are skipped.
inline DataSeries read_data_csv(std::istream& is, double to_metres = 1e-6) {
  DataSeries d;
  std::string line;
  int line_no = 0;
  bool first_row = true;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto comma = t.find(',');
    const auto s = comma == std::string::npos ? std::nullopt : detail::parse_double(t.substr(0, comma));
    std::string rest = comma == std::string::npos ? "" : t.substr(comma + 1);
    if (const auto c2 = rest.find(','); c2 != std::string::npos) rest = rest.substr(0, c2);
    const auto v = detail::parse_double(rest);
    if (!s || !v) {
      if (first_row) {
        first_row = false;
        continue;
      }
      throw domain_error("data CSV line " + std::to_string(line_no) + ": malformed row");
    }
    first_row = false;
    const double pos = s.value() * to_metres;
    if (!d.positions_m.empty() && !(pos > d.positions_m.back())) {
      throw domain_error("data CSV line " + std::to_string(line_no) +
                         ": positions must be strictly increasing");
    }
    d.positions_m.push_back(pos);
    d.counts.push_back(v.value());
  }
  if (d.positions_m.size() < min_data_rows) {
    throw domain_error("data CSV: >= 10 rows required");
  }
  return d;
}

/// Linear interpolation of the pattern at s (inside its range).
inline double interpolate(const DiffractionPattern& pat, double s) {
  const auto& p = pat.points;
  if (p.empty() || s < p.front().s_m || s > p.back().s_m) {
    throw domain_error("position outside the model scan range");
  }
  const auto it = std::lower_bound(p.begin(), p.end(), s,
                                   [](const PatternPoint& q, double v) { return q.s_m < v; });
  if (it == p.begin()) return it->intensity;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (s - lo.s_m) / (hi.s_m - lo.s_m);
  return lo.intensity + t * (hi.intensity - lo.intensity);
}

struct ComparisonReport {
  double scale = 0.0;
  double rmse = 0.0;
  std::size_t rows = 0;
  std::optional<double> model_visibility;
  std::optional<double> data_visibility;
};

/// Fits data ~ scale * model by least squares at the data abscissae and
/// reports the residual RMSE and both fringe visibilities.
inline ComparisonReport compare(const DiffractionPattern& model, const DataSeries& data) {
  if (data.positions_m.size() < min_data_rows) throw domain_error(">= 10 rows required");
  if (model.points.size() < 2) throw domain_error("model pattern has fewer than 2 points");
  if (data.positions_m.front() < model.points.front().s_m ||
      data.positions_m.back() > model.points.back().s_m) {
    throw domain_error("data positions extend beyond the model scan range");
  }
  std::vector<double> m(data.positions_m.size());
  double mm = 0.0, md = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = interpolate(model, data.positions_m[i]);
    mm += m[i] * m[i];
    md += m[i] * data.counts[i];
  }
  if (!(mm > 0.0)) throw domain_error("model is zero at every data position");
  ComparisonReport r;
  r.scale = md / mm;
  if (!(r.scale > 0.0)) throw domain_error("least-squares scale is not positive");
  double ss = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double e = r.scale * m[i] - data.counts[i];
    ss += e * e;
  }
  r.rows = m.size();
  r.rmse = std::sqrt(ss / static_cast<double>(m.size()));
  try {
    r.model_visibility = visibility(model);
  } catch (const domain_error&) {
  }
  try {
    DiffractionPattern as_pattern;
    as_pattern.meta.nominal_fringe_m = 0.0;  // data sampling is whatever was digitized
    for (std::size_t i = 0; i < m.size(); ++i) {
      as_pattern.points.push_back({data.positions_m[i], std::max(0.0, data.counts[i])});
    }
    r.data_visibility = visibility(as_pattern);
  } catch (const domain_error&) {
  }
  return r;
}

// ---------------------------------------------------------------------------
// Minimal static SVG line plot.

inline void write_svg(std::ostream& os, const DiffractionPattern& pat,
                      const DataSeries* overlay = nullptr, double overlay_scale = 1.0,
                      const std::string& title = "") {
  const double W = 720, H = 440, ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = W - ml - mr, ph = H - mt - mb;
  double xmin = pat.points.front().s_m * 1e6, xmax = pat.points.back().s_m * 1e6;
  double ymax = 0.0;
  for (const auto& p : pat.points) ymax = std::max(ymax, p.intensity);
  if (overlay) {
    for (double c : overlay->counts) ymax = std::max(ymax, c / overlay_scale);
  }
  if (!(ymax > 0.0)) ymax = 1.0;
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  auto X = [&](double s_um) { return ml + (s_um - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double v) { return mt + ph - v / ymax * ph; };
  auto fmt = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", v);
    return std::string(b);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
     << mt + ph << "\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
     << "\"/>\n";
  for (int i = 0; i <= 6; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 6.0;
    os << "<line x1=\"" << X(xv) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(xv) << "\" y2=\""
       << mt + ph + 5 << "\"/>\n";
    const double yv = ymax * i / 5.0;
    if (i <= 5) {
      os << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(yv) << "\" x2=\"" << ml << "\" y2=\""
         << Y(yv) << "\"/>\n";
    }
  }
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int i = 0; i <= 6; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 6.0;
    os << "<text x=\"" << X(xv) << "\" y=\"" << mt + ph + 20 << "\" text-anchor=\"middle\">"
       << fmt(xv) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double yv = ymax * i / 5.0;
    os << "<text x=\"" << ml - 8 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\">screen position s (um)</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << mt + ph / 2 << ")\">relative intensity</text>\n";
  if (!title.empty()) {
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title
       << "</text>\n";
  }
  os << "</g>\n<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (const auto& p : pat.points) os << fmt(X(p.s_m * 1e6)) << ',' << fmt(Y(p.intensity)) << ' ';
  os << "\"/>\n";
  if (overlay) {
    os << "<g fill=\"none\" stroke=\"#b22222\">\n";
    for (std::size_t i = 0; i < overlay->positions_m.size(); ++i) {
      os << "<circle cx=\"" << fmt(X(overlay->positions_m[i] * 1e6)) << "\" cy=\""
         << fmt(Y(overlay->counts[i] / overlay_scale)) << "\" r=\"3\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
}

}  // namespace slitwave
