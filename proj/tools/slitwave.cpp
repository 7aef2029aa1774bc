// slitwave: double-slit matter-wave diffraction from the command line.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "slitwave/slitwave.hpp"

namespace {

using namespace slitwave;

// Flags shared by scan, verify and compare; each maps onto a config key.
struct ModelFlags {
  std::string config_path;
  std::map<std::string, std::string> settings;
  std::vector<double> range;
  unsigned threads = 0;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "Flat key = value configuration file")
        ->check(CLI::ExistingFile);
    const std::vector<std::pair<std::string, std::string>> keyed = {
        {"--preset", "preset"},      {"--width", "a"},        {"--length", "b"},
        {"--thickness", "c"},        {"--gap", "d"},          {"--distance", "L"},
        {"--wavelength", "wavelength"}, {"--mass", "mass"},   {"--A1", "A1"},
        {"--A2", "A2"},              {"--c1", "c1"},          {"--c2", "c2"},
        {"--alpha", "alpha"},        {"--nu", "nu"},          {"--weight-tol", "weight_tol"},
        {"--points", "points"},      {"--mode", "mode"},      {"--normalize", "normalize"},
        {"--m-max", "m_max"},        {"--n-max", "n_max"},    {"--tail-tol", "tail_tol"},
        {"--m-cap", "m_cap"},        {"--adaptive", "adaptive"}};
    for (const auto& [flag, key] : keyed) {
      app.add_option(flag, settings[key], "config key '" + key + "'");
    }
    app.add_option("--range", range, "Scan range LO HI in metres")->expected(2);
    app.add_option("--threads", threads, "Worker threads (default: SLITWAVE_THREADS or all cores)");
  }

  // Applies the config file, then explicitly given flags, on top of `cfg`.
  RunConfig resolve(const CLI::App& app, RunConfig cfg = {}) const {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw domain_error("cannot open config file " + config_path);
      apply_config(cfg, in, config_path);
    }
    // A preset on the command line replaces a parameter block from the file.
    if (app.count("--preset")) cfg.params = ParameterBlock{};
    for (const auto& [key, value] : settings) {
      const std::string flag = flag_for(key);
      if (app.count(flag) == 0) continue;
      try {
        apply_setting(cfg, key, value);
      } catch (const domain_error& e) {
        throw domain_error("flag " + flag + ": " + e.what());
      }
    }
    if (range.size() == 2) {
      cfg.grid.s_min = range[0];
      cfg.grid.s_max = range[1];
    }
    cfg.threads = resolve_threads(app.count("--threads") ? threads : cfg.threads);
    return cfg;
  }

  static std::string flag_for(const std::string& key) {
    static const std::map<std::string, std::string> flags = {
        {"preset", "--preset"},    {"a", "--width"},         {"b", "--length"},
        {"c", "--thickness"},      {"d", "--gap"},           {"L", "--distance"},
        {"wavelength", "--wavelength"}, {"mass", "--mass"},  {"A1", "--A1"},
        {"A2", "--A2"},            {"c1", "--c1"},           {"c2", "--c2"},
        {"alpha", "--alpha"},      {"nu", "--nu"},           {"weight_tol", "--weight-tol"},
        {"points", "--points"},    {"mode", "--mode"},       {"normalize", "--normalize"},
        {"m_max", "--m-max"},      {"n_max", "--n-max"},     {"tail_tol", "--tail-tol"},
        {"m_cap", "--m-cap"},      {"adaptive", "--adaptive"}};
    return flags.at(key);
  }

  static unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SLITWAVE_THREADS")) {
      const auto v = detail::parse_double(env);
      if (!v || *v < 1 || *v != std::floor(*v)) {
        throw domain_error("SLITWAVE_THREADS must be a positive integer");
      }
      return static_cast<unsigned>(*v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

ScanOptions scan_options(const RunConfig& cfg) {
  ScanOptions opt;
  opt.grid = cfg.grid;
  opt.mode = cfg.mode;
  opt.normalization = cfg.normalization;
  opt.truncation = cfg.truncation;
  opt.workers = cfg.threads;
  return opt;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw domain_error("cannot write " + path);
  out << text;
  if (!out) throw domain_error("failed writing " + path);
}

void print_summary(const SlitSetup& setup, const DiffractionPattern& pat) {
  std::cout << "preset:            " << setup.name << "\n";
  std::cout << "points:            " << pat.points.size() << "\n";
  std::cout << "mode:              " << to_string(pat.meta.mode) << " (Lambda_t = "
            << lambda_from_alpha(pat.meta.coherence.alpha_abs) << ")\n";
  std::cout << "truncation:        m_max = " << pat.meta.m_max << ", n_max = " << pat.meta.n_max;
  if (std::isfinite(pat.meta.tail_estimate)) {
    std::cout << ", last change " << pat.meta.tail_estimate;
  }
  std::cout << "\n";
  const std::size_t c = central_maximum_index(pat);
  std::cout << "central maximum:   s = " << pat.points[c].s_m * 1e6 << " um\n";
  std::cout << "nominal fringe:    " << pat.meta.nominal_fringe_m * 1e6 << " um (lambda L / (a + d))\n";
  const double span = pat.points.back().s_m - pat.points.front().s_m;
  if (span < 3.0 * pat.meta.nominal_fringe_m) {
    std::cout << "fringe spacing:    n/a (scan covers fewer than 3 fringes)\n";
    std::cout << "visibility:        n/a (scan covers fewer than 3 fringes)\n";
  } else {
    try {
      std::cout << "fringe spacing:    " << fringe_spacing(pat) * 1e6 << " um\n";
    } catch (const domain_error& e) {
      std::cout << "fringe spacing:    n/a (" << e.what() << ")\n";
    }
    try {
      std::cout << "visibility:        " << visibility(pat) << "\n";
    } catch (const domain_error& e) {
      std::cout << "visibility:        n/a (" << e.what() << ")\n";
    }
  }
  if (pat.meta.paraxial_warning) {
    std::cerr << "warning: scan extends beyond |s| = 0.01 L; the linearized propagator is "
                 "less accurate there\n";
  }
}

int run_scan(const RunConfig& cfg) {
  const SlitSetup setup = cfg.resolve_setup();
  const DiffractionPattern pat = screen_scan(setup, scan_options(cfg));
  std::ostringstream csv;
  write_pattern_csv(csv, pat);
  if (cfg.out_path.empty() || cfg.out_path == "-") {
    std::cout << csv.str();
  } else {
    write_file(cfg.out_path, csv.str());
  }
  if (!cfg.svg_path.empty()) {
    std::ostringstream svg;
    write_svg(svg, pat, nullptr, 1.0, setup.name);
    write_file(cfg.svg_path, svg.str());
  }
  if (!cfg.out_path.empty() && cfg.out_path != "-") print_summary(setup, pat);
  return 0;
}

int run_verify(const RunConfig& cfg, double tol) {
  const SlitSetup setup = cfg.resolve_setup();
  const ScanGrid& grid = cfg.grid;
  grid.validate();
  oracle::QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  struct Row {
    double s;
    double err_left;
    double err_right;
  };
  std::vector<Row> rows(grid.n_points);
  detail::parallel_for(rows.size(), cfg.threads, [&](std::size_t i) {
    const double s = grid.position(static_cast<int>(i));
    const ScreenPoint pt = ScreenPoint::at(s, setup.geometry.screen_L_m);
    auto rel = [&](SlitSide side, double A) {
      const complex cf =
          diffraction_amplitude(side, pt, setup.geometry, setup.particle, cfg.truncation, A);
      const auto q = oracle::amplitude_by_quadrature(side, pt, setup.geometry, setup.particle,
                                                     cfg.truncation, A, spec);
      const double scale = std::abs(q.value);
      return scale > 0.0 ? std::abs(cf - q.value) / scale : std::abs(cf);
    };
    rows[i] = {s, rel(SlitSide::left, setup.amplitude_1), rel(SlitSide::right, setup.amplitude_2)};
  });
  int failures = 0;
  std::cout << "closed form vs aperture quadrature, m_max = " << cfg.truncation.m_max
            << ", n_max = " << cfg.truncation.n_max << ", tolerance " << tol << "\n";
  for (const auto& r : rows) {
    const bool ok = r.err_left <= tol && r.err_right <= tol;
    failures += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << "  s = " << std::setw(10) << r.s * 1e6
              << " um  rel.err left " << std::setw(11) << r.err_left << "  right "
              << std::setw(11) << r.err_right << "\n";
  }
  std::cout << (failures == 0 ? "all " : "") << rows.size() - failures << "/" << rows.size()
            << " points agree\n";
  return failures == 0 ? 0 : 1;
}

int run_compare(const RunConfig& cfg, const std::string& model_path) {
  // Data first, so a bad file fails before the scan runs.
  if (cfg.data_path.empty()) throw domain_error("compare needs --data");
  std::ifstream din(cfg.data_path);
  if (!din) throw domain_error("cannot open data file " + cfg.data_path);
  const DataSeries data = read_data_csv(din, unit_scale(cfg.data_unit));

  DiffractionPattern model;
  std::string name = "model";
  if (!model_path.empty()) {
    std::ifstream in(model_path);
    if (!in) throw domain_error("cannot open model pattern " + model_path);
    model = read_pattern_csv(in);
    name = model.meta.preset;
  } else {
    const SlitSetup setup = cfg.resolve_setup();
    model = screen_scan(setup, scan_options(cfg));
    name = setup.name;
  }
  const ComparisonReport rep = compare(model, data);
  std::cout << "model:             " << name << "\n";
  std::cout << "data rows:         " << rep.rows << "\n";
  std::cout << "scale:             " << std::setprecision(10) << rep.scale << "\n";
  std::cout << "rmse:              " << rep.rmse << "\n";
  std::cout << "model visibility:  "
            << (rep.model_visibility ? std::to_string(*rep.model_visibility) : "n/a") << "\n";
  std::cout << "data visibility:   "
            << (rep.data_visibility ? std::to_string(*rep.data_visibility) : "n/a") << "\n";
  if (!cfg.svg_path.empty()) {
    std::ostringstream svg;
    write_svg(svg, model, &data, rep.scale, name + " vs data");
    write_file(cfg.svg_path, svg.str());
  }
  if (!cfg.out_path.empty()) {
    std::ostringstream csv;
    write_pattern_csv(csv, model);
    write_file(cfg.out_path, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slitwave: matter-wave double-slit diffraction patterns"};
  app.require_subcommand(1);

  ModelFlags scan_flags, verify_flags, compare_flags;
  std::string scan_out, scan_svg, cmp_data, cmp_unit = "um", cmp_model, cmp_svg, cmp_out;
  double verify_tol = 1e-6;

  auto* scan = app.add_subcommand("scan", "Compute a screen intensity pattern");
  scan_flags.attach(*scan);
  scan->add_option("--out", scan_out, "Pattern CSV path ('-' or omitted: stdout)");
  scan->add_option("--svg", scan_svg, "Write an SVG plot");

  auto* verify = app.add_subcommand("verify", "Check closed-form amplitudes against quadrature");
  verify_flags.attach(*verify);
  verify->add_option("--tol", verify_tol, "Relative tolerance")->capture_default_str();

  auto* cmp = app.add_subcommand("compare", "Compare a model pattern with digitized data");
  compare_flags.attach(*cmp);
  cmp->add_option("--data", cmp_data, "Data CSV (position, counts)")->required();
  cmp->add_option("--data-unit", cmp_unit, "Unit of data positions: m, mm, um, nm")
      ->capture_default_str();
  cmp->add_option("--model", cmp_model, "Use a pattern CSV instead of running a scan");
  cmp->add_option("--svg", cmp_svg, "Write an SVG overlay plot");
  cmp->add_option("--out", cmp_out, "Write the model pattern CSV");

  auto* preset = app.add_subcommand("preset", "List or show the built-in presets");
  preset->require_subcommand(1);
  auto* plist = preset->add_subcommand("list", "List preset names");
  std::string show_name;
  auto* pshow = preset->add_subcommand("show", "Print a preset as a config file");
  pshow->add_option("name", show_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*scan) {
      RunConfig cfg = scan_flags.resolve(*scan);
      cfg.out_path = scan_out;
      cfg.svg_path = scan_svg;
      return run_scan(cfg);
    }
    if (*verify) {
      RunConfig base;
      base.grid = {-50e-6, 50e-6, 8};
      base.truncation.m_max = 32;
      base.truncation.n_max = 8;
      const RunConfig cfg = verify_flags.resolve(*verify, base);
      return run_verify(cfg, verify_tol);
    }
    if (*cmp) {
      RunConfig cfg = compare_flags.resolve(*cmp);
      cfg.data_path = cmp_data;
      cfg.data_unit = cmp_unit;
      cfg.svg_path = cmp_svg;
      cfg.out_path = cmp_out;
      return run_compare(cfg, cmp_model);
    }
    if (*plist) {
      for (const auto& n : preset_names()) {
        std::cout << n << "  " << make_preset(n).description << "\n";
      }
      return 0;
    }
    if (*pshow) {
      std::cout << format_preset(make_preset(show_name));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "slitwave: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
