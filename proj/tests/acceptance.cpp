// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slitwave/slitwave.hpp"

using namespace slitwave;

namespace {

using clock_type = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

SlitGeometry ref18_geometry() { return make_preset("ref18").geometry; }

oracle::QuadratureSpec integral_spec(double len) {
  oracle::QuadratureSpec s;
  s.rel_tol = 1e-13;
  s.abs_tol = 1e-16 * len;
  return s;
}

// 1. closed-form aperture integrals against adaptive quadrature
Outcome integrals_vs_quadrature() {
  const auto t0 = clock_type::now();
  const SlitGeometry g = ref18_geometry();
  const double k = make_preset("ref18").particle.wavenumber();
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> mode(0, 200), nmode(0, 60), kind(0, 2), side(0, 1);
  std::uniform_real_distribution<double> angle(-2e-4, 2e-4), unit(-1.0, 1.0);
  double worst = 0.0;
  int near_resonance = 0;
  for (int draw = 0; draw < 100; ++draw) {
    const bool resonant = draw % 10 == 0;
    const int which = kind(rng);
    complex closed, numeric;
    double len;
    if (which == 0) {
      const int n = nmode(rng);
      const double b = g.length_b_m;
      const double q = (2 * n + 1) * pi / b;
      double u = k * angle(rng);
      if (resonant) u = (unit(rng) < 0 ? -q : q) * (1.0 + 1e-9 * unit(rng));
      closed = axial_integral(n, u, b);
      auto f = [&](double x) { return std::polar(std::sin(q * x), -u * x); };
      numeric = oracle::integrate_1d(f, 0.0, b, integral_spec(b), q + std::abs(u)).value;
      len = b;
    } else {
      const int m = mode(rng);
      const Interval iv = aperture(side(rng) ? SlitSide::right : SlitSide::left, g);
      const double q = (2 * m + 1) * pi / g.width_a_m;
      double w = k * angle(rng);
      if (resonant) w = (unit(rng) < 0 ? -q : q) * (1.0 + 1e-9 * unit(rng));
      const auto [ic, is] = transverse_integrals(m, w, iv, g.width_a_m);
      const bool cosine = which == 1;
      closed = cosine ? ic : is;
      auto f = [&](double y) {
        return std::polar(cosine ? std::cos(q * y) : std::sin(q * y), -w * y);
      };
      numeric = oracle::integrate_1d(f, iv.lo, iv.hi, integral_spec(iv.length()), q + std::abs(w)).value;
      len = iv.length();
    }
    if (resonant) ++near_resonance;
    // Relative to the integral itself; the floor only matters for values
    // that vanish by symmetry.
    const double rel = std::abs(closed - numeric) / std::max(std::abs(numeric), 1e-9 * len);
    worst = std::max(worst, rel);
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 10.0,
          "100 draws (" + std::to_string(near_resonance) + " near resonance), worst relative error " +
              fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

// 2. full slit amplitude against 2-D quadrature at 8 screen points
Outcome amplitude_vs_quadrature() {
  const auto t0 = clock_type::now();
  const auto preset = make_preset("ref18");
  const Truncation t{32, 8, 1e-4, 16384, false};
  oracle::QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double s = -70e-6 + 20e-6 * i;
    const ScreenPoint pt = ScreenPoint::at(s, preset.geometry.screen_L_m);
    for (SlitSide side : {SlitSide::left, SlitSide::right}) {
      const double amp = side == SlitSide::left ? preset.amplitude_1 : preset.amplitude_2;
      const complex fast = diffraction_amplitude(side, pt, preset.geometry, preset.particle, t, amp);
      const complex slow =
          oracle::amplitude_by_quadrature(side, pt, preset.geometry, preset.particle, t, amp, spec).value;
      worst = std::max(worst, std::abs(fast - slow) / std::abs(slow));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 300.0,
          "8 points x 2 slits at m_max=32, n_max=8, worst relative error " + fmt("%.2e", worst) +
              ", " + fmt("%.1f", secs) + " s"};
}

// 3. wall zeros for arbitrary truncation, centre value at 200 x 200
Outcome boundary_conditions() {
  const auto preset = make_preset("ref18");
  SlitGeometry g = preset.geometry;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> trunc(1, 300);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  int nonzero = 0, checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Truncation t{trunc(rng), trunc(rng) / 4 + 1, 1e-4, 16384, false};
    g.thickness_c_m = trial % 2 ? 0.0 : 40e-9 * frac(rng);
    const double z = g.thickness_c_m * frac(rng);
    for (SlitSide side : {SlitSide::left, SlitSide::right}) {
      const Interval ap = aperture(side, g);
      const double x = g.length_b_m * frac(rng);
      const double y = ap.lo + g.width_a_m * frac(rng);
      for (auto [px, py] : {std::pair{x, ap.lo}, {x, ap.hi}, {0.0, y}, {g.length_b_m, y}}) {
        ++checked;
        if (in_slit_wavefunction(px, py, z, side, g, preset.particle, t, preset.amplitude_1) !=
            complex(0.0)) {
          ++nonzero;
        }
      }
    }
  }
  g.thickness_c_m = 0.0;
  const Truncation full{200, 200, 1e-4, 16384, false};
  double worst = 0.0;
  for (SlitSide side : {SlitSide::left, SlitSide::right}) {
    const double A = side == SlitSide::left ? preset.amplitude_1 : preset.amplitude_2;
    const auto v = in_slit_wavefunction(g.length_b_m / 2, aperture(side, g).mid(), 0.0, side, g,
                                        preset.particle, full, A);
    worst = std::max(worst, std::abs(v - A) / A);
  }
  return {nonzero == 0 && worst < 0.02,
          std::to_string(checked - nonzero) + "/" + std::to_string(checked) +
              " wall samples exactly zero; centre error at 200x200 " + fmt("%.3f", 100 * worst) + "%"};
}

ScanOptions default_scan(unsigned workers) {
  ScanOptions o;
  o.workers = workers;
  return o;
}

// 4. fringe spacing of both presets against lambda L / (a + d)
Outcome fringe_spacings() {
  bool pass = true;
  std::ostringstream detail;
  for (const char* name : {"ref18", "ref19"}) {
    const auto t0 = clock_type::now();
    const SlitSetup setup = SlitSetup::from_preset(make_preset(name));
    const auto pat = screen_scan(setup, default_scan(4));
    const double secs = seconds_since(t0);
    const double expected = setup.nominal_fringe();
    const double got = fringe_spacing(pat);
    const bool ok = std::abs(got - expected) <= 0.1 * expected && secs < 60.0;
    pass = pass && ok;
    detail << name << " " << fmt("%.2f", got * 1e6) << " um vs " << fmt("%.2f", expected * 1e6)
           << " um +/- 10% (" << (ok ? "ok" : "out of band") << ", m_max " << pat.meta.m_max << ", "
           << fmt("%.1f", secs) << " s); ";
  }
  return {pass, detail.str()};
}

// 5. one slit open: first minima at sin(beta) = +/- lambda / a
Outcome single_slit_limit() {
  SlitSetup setup = SlitSetup::from_preset(make_preset("ref18"));
  setup.coherence = {1.0, 0.0, 1.0};
  setup.amplitude_2 = 0.0;
  setup.weight_tol = 1e-12;
  ScanOptions opt = default_scan(4);
  opt.mode = IntensityMode::coherent;
  const auto pat = screen_scan(setup, opt);
  const double expected = setup.particle.wavelength_m / setup.geometry.width_a_m;
  // Largest sample is the envelope centre; walk outwards to the first minimum.
  std::size_t c = 0;
  for (std::size_t i = 0; i < pat.points.size(); ++i) {
    if (pat.points[i].intensity > pat.points[c].intensity) c = i;
  }
  double worst = 0.0;
  std::ostringstream detail;
  for (int dir : {-1, 1}) {
    std::size_t i = c;
    while (i > 0 && i + 1 < pat.points.size() && !detail::is_local_min(pat.points, i)) i += dir;
    if (i == 0 || i + 1 >= pat.points.size()) return {false, "no minimum inside the scan range"};
    const double sb = sin_beta_from_position(detail::refine_extremum(pat.points, i),
                                             setup.geometry.screen_L_m);
    worst = std::max(worst, std::abs(std::abs(sb) - expected) / expected);
    detail << (dir < 0 ? "minus side " : "plus side ") << fmt("%.4e", sb) << "; ";
  }
  detail << "lambda/a = " << fmt("%.4e", expected) << ", worst deviation " << fmt("%.2f", 100 * worst) << "%";
  return {worst <= 0.1, detail.str()};
}

// 6. decoherence algebra and measured visibility
Outcome decoherence() {
  std::ostringstream detail;
  bool pass = true;

  // Pointwise identities on random amplitudes.
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  double worst_double = 0.0, worst_incoh = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const complex p1(nd(rng), nd(rng)), p2(nd(rng), nd(rng));
    const CoherenceConfig full{0.915, 0.40345, 1.0};
    const double coh = coherent_intensity(p1, p2, full);
    worst_double = std::max(worst_double, std::abs(decohered_intensity(p1, p2, full) - 2 * coh) / coh);
    const CoherenceConfig none{0.915, 0.40345, 0.0};
    const double incoh = 0.915 * 0.915 * std::norm(p1) + 0.40345 * 0.40345 * std::norm(p2);
    worst_incoh = std::max(worst_incoh, std::abs(decohered_intensity(p1, p2, none) - incoh) / incoh);
  }
  pass = pass && worst_double <= 1e-12 && worst_incoh <= 1e-12;
  detail << "2x coherent " << fmt("%.1e", worst_double) << ", no cross term " << fmt("%.1e", worst_incoh);

  // Symmetric double slit with the ref19 geometry.
  SlitSetup setup = SlitSetup::from_preset(make_preset("ref19"));
  setup.name = "symmetric";
  setup.amplitude_1 = setup.amplitude_2 = 1.0;
  setup.weight_tol = 1e-12;
  double prev = -1.0;
  for (double lt : {0.25, 0.5, 0.75, 1.0}) {
    setup.coherence = {std::sqrt(0.5), std::sqrt(0.5), alpha_from_visibility(lt)};
    const auto pat = screen_scan(setup, default_scan(4));
    const double v = visibility(pat);
    const bool ok = std::abs(v - lt) <= 0.05;
    pass = pass && ok && v > prev;
    prev = v;
    detail << "; Lambda " << lt << " -> " << fmt("%.4f", v);
  }
  return {pass, detail.str()};
}

// 7. presets carry the published values
Outcome preset_fidelity() {
  const auto a = make_preset("ref18");
  const auto b = make_preset("ref19");
  const bool ok18 = a.geometry.width_a_m == 47.5e-9 && a.particle.wavelength_m == 2.4e-12 &&
                    a.geometry.gap_d_m == 52.5e-9 && a.geometry.screen_L_m == 1.25 &&
                    a.amplitude_1 == 1.6e12 && a.amplitude_2 == 1.7e12 && a.coherence.c1 == 0.915 &&
                    a.coherence.c2 == 0.40345 && a.visibility_nu == 0.53;
  const bool ok19 = b.geometry.width_a_m == 42e-9 && b.particle.wavelength_m == 4.8e-12 &&
                    b.geometry.gap_d_m == 86e-9 && b.geometry.screen_L_m == 1.25 &&
                    b.amplitude_1 == 5.35e13 && b.amplitude_2 == 2.1e13 && b.coherence.c1 == 0.9075 &&
                    b.coherence.c2 == 0.42 && b.visibility_nu == 0.88;
  bool loads = true;
  for (const auto& p : {a, b}) {
    try {
      SlitSetup::from_preset(p).validate();
    } catch (const std::exception&) {
      loads = false;
    }
  }
  return {ok18 && ok19 && loads,
          "c1^2+c2^2: ref18 " + fmt("%.7f", a.coherence.weight_norm()) + ", ref19 " +
              fmt("%.8f", b.coherence.weight_norm()) + " (slack " + fmt("%.0e", preset_weight_tol) + ")"};
}

// 8. byte-identical CSV for 1, 2 and 8 workers
Outcome determinism() {
  const SlitSetup setup = SlitSetup::from_preset(make_preset("ref18"));
  std::vector<std::string> csv;
  for (unsigned w : {1u, 2u, 8u}) {
    std::ostringstream os;
    write_pattern_csv(os, screen_scan(setup, default_scan(w)));
    csv.push_back(os.str());
  }
  const bool same = csv[0] == csv[1] && csv[0] == csv[2];
  return {same, std::to_string(csv[0].size()) + " bytes, " + (same ? "identical" : "different")};
}

// 9. visibility parameter and CSV round-trips
Outcome round_trips() {
  double worst_nu = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double nu = i / 10.0;
    worst_nu = std::max(worst_nu, std::abs(lambda_from_alpha(alpha_from_visibility(nu)) - nu));
  }
  const SlitSetup setup = SlitSetup::from_preset(make_preset("ref19"));
  ScanOptions opt = default_scan(4);
  opt.grid = {-100e-6, 100e-6, 401};
  const auto pat = screen_scan(setup, opt);
  std::ostringstream os;
  write_pattern_csv(os, pat);
  std::istringstream is(os.str());
  const auto back = read_pattern_csv(is);
  double worst_csv = back.points.size() == pat.points.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; worst_csv < 1.0 && i < pat.points.size(); ++i) {
    worst_csv = std::max(worst_csv, std::abs(back.points[i].intensity - pat.points[i].intensity));
    worst_csv = std::max(worst_csv, std::abs(back.points[i].s_m - pat.points[i].s_m) / 1e-6);
  }
  return {worst_nu <= 1e-12 && worst_csv <= 1e-12,
          "nu round-trip " + fmt("%.1e", worst_nu) + ", CSV round-trip " + fmt("%.1e", worst_csv)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"integral oracle", integrals_vs_quadrature},
      {"propagation oracle", amplitude_vs_quadrature},
      {"boundary conditions", boundary_conditions},
      {"fringe spacing", fringe_spacings},
      {"single-slit limit", single_slit_limit},
      {"decoherence algebra", decoherence},
      {"preset fidelity", preset_fidelity},
      {"determinism", determinism},
      {"round-trips", round_trips},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
