#include "rydlink/config.hpp"

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdlib>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

extern char** environ;

namespace rydlink {

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& raw, const std::string& name) {
  std::string t = trim(raw);
  if (t.empty()) throw ParseError(name + ": empty value");
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw ParseError(name + ": not a number: '" + raw + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& raw, const std::string& name) {
  std::string t = trim(raw);
  if (t.empty() || t[0] == '-') throw ParseError(name + ": not an unsigned integer: '" + raw + "'");
  char* end = nullptr;
  unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) throw ParseError(name + ": not an unsigned integer: '" + raw + "'");
  return v;
}

std::size_t parse_size(const std::string& raw, const std::string& name) {
  return static_cast<std::size_t>(parse_u64(raw, name));
}

bool parse_bool(const std::string& raw, const std::string& name) {
  std::string t = lower(trim(raw));
  if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "off" || t == "no") return false;
  throw ParseError(name + ": not a boolean: '" + raw + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_auto(bool is_auto, double v) { return is_auto ? "auto" : fmt(v); }

bool is_auto(const std::string& raw) { return lower(trim(raw)) == "auto"; }

struct KeyDesc {
  std::string name; // section.key
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeyDesc>& key_table() {
  using C = ExperimentConfig;
  static const std::vector<KeyDesc> table = [] {
    std::vector<KeyDesc> t;
    auto add = [&](const std::string& name, std::function<void(C&, const std::string&)> set,
                   std::function<std::string(const C&)> get) {
      t.push_back({name, std::move(set), std::move(get)});
    };
    // [atoms]
    add("atoms.gamma1_hz",
        [](C& c, const std::string& v) { c.sys.gamma1 = phys::two_pi * parse_double(v, "gamma1_hz"); },
        [](const C& c) { return fmt(c.sys.gamma1 / phys::two_pi); });
    add("atoms.gamma2_hz",
        [](C& c, const std::string& v) { c.sys.gamma2 = phys::two_pi * parse_double(v, "gamma2_hz"); },
        [](const C& c) { return fmt(c.sys.gamma2 / phys::two_pi); });
    add("atoms.gamma3_hz",
        [](C& c, const std::string& v) { c.sys.gamma3 = phys::two_pi * parse_double(v, "gamma3_hz"); },
        [](const C& c) { return fmt(c.sys.gamma3 / phys::two_pi); });
    add("atoms.gamma4_hz",
        [](C& c, const std::string& v) { c.sys.gamma4 = phys::two_pi * parse_double(v, "gamma4_hz"); },
        [](const C& c) { return fmt(c.sys.gamma4 / phys::two_pi); });
    add("atoms.dipole_probe_ea0",
        [](C& c, const std::string& v) {
          c.sys.dip_probe = parse_double(v, "dipole_probe_ea0") * phys::elementary_charge * phys::bohr_radius;
        },
        [](const C& c) { return fmt(c.sys.dip_probe / (phys::elementary_charge * phys::bohr_radius)); });
    add("atoms.dipole_rf_ea0",
        [](C& c, const std::string& v) {
          c.sys.dip_rf = parse_double(v, "dipole_rf_ea0") * phys::elementary_charge * phys::bohr_radius;
        },
        [](const C& c) { return fmt(c.sys.dip_rf / (phys::elementary_charge * phys::bohr_radius)); });
    add("atoms.density_cm3",
        [](C& c, const std::string& v) { c.sys.density = parse_double(v, "density_cm3") * 1e6; },
        [](const C& c) { return fmt(c.sys.density / 1e6); });
    add("atoms.mass_kg",
        [](C& c, const std::string& v) { c.sys.mass = parse_double(v, "mass_kg"); },
        [](const C& c) { return fmt(c.sys.mass); });
    add("atoms.temperature_k",
        [](C& c, const std::string& v) {
          double t = parse_double(v, "temperature_k");
          c.sys.temperature = t;
          c.env.temperature = t;
        },
        [](const C& c) { return fmt(c.sys.temperature); });

    // [drives]
    add("drives.omega_p_hz",
        [](C& c, const std::string& v) { c.drives.omega_p = phys::two_pi * parse_double(v, "omega_p_hz"); },
        [](const C& c) { return fmt(c.drives.omega_p / phys::two_pi); });
    add("drives.omega_c_hz",
        [](C& c, const std::string& v) { c.drives.omega_c = phys::two_pi * parse_double(v, "omega_c_hz"); },
        [](const C& c) { return fmt(c.drives.omega_c / phys::two_pi); });
    add("drives.omega_rf_hz",
        [](C& c, const std::string& v) { c.drives.rf_drive = phys::two_pi * parse_double(v, "omega_rf_hz"); },
        [](const C& c) { return fmt(std::abs(c.drives.rf_drive) / phys::two_pi); });
    add("drives.omega_lo_hz",
        [](C& c, const std::string& v) { c.omega_lo_hz = parse_double(v, "omega_lo_hz"); },
        [](const C& c) { return fmt(c.omega_lo_hz); });
    add("drives.delta_p_hz",
        [](C& c, const std::string& v) { c.drives.delta_p = phys::two_pi * parse_double(v, "delta_p_hz"); },
        [](const C& c) { return fmt(c.drives.delta_p / phys::two_pi); });
    add("drives.delta_c_hz",
        [](C& c, const std::string& v) { c.drives.delta_c = phys::two_pi * parse_double(v, "delta_c_hz"); },
        [](const C& c) { return fmt(c.drives.delta_c / phys::two_pi); });
    add("drives.delta_rf_hz",
        [](C& c, const std::string& v) { c.drives.delta_rf = phys::two_pi * parse_double(v, "delta_rf_hz"); },
        [](const C& c) { return fmt(c.drives.delta_rf / phys::two_pi); });
    add("drives.lambda_p_nm",
        [](C& c, const std::string& v) { c.drives.lambda_p = parse_double(v, "lambda_p_nm") * 1e-9; },
        [](const C& c) { return fmt(c.drives.lambda_p / 1e-9); });
    add("drives.lambda_c_nm",
        [](C& c, const std::string& v) { c.drives.lambda_c = parse_double(v, "lambda_c_nm") * 1e-9; },
        [](const C& c) { return fmt(c.drives.lambda_c / 1e-9); });
    add("drives.probe_diam_mm",
        [](C& c, const std::string& v) { c.drives.beam_diam = parse_double(v, "probe_diam_mm") * 1e-3; },
        [](const C& c) { return fmt(c.drives.beam_diam / 1e-3); });
    add("drives.coupling_diam_mm",
        [](C& c, const std::string& v) { c.coupling_diam = parse_double(v, "coupling_diam_mm") * 1e-3; },
        [](const C& c) { return fmt(c.coupling_diam / 1e-3); });

    // [probe]
    add("probe.cell_length",
        [](C& c, const std::string& v) { c.cell_length = parse_double(v, "cell_length"); },
        [](const C& c) { return fmt(c.cell_length); });
    add("probe.alpha",
        [](C& c, const std::string& v) {
          c.alpha_auto = is_auto(v);
          if (!c.alpha_auto) c.alpha = parse_double(v, "alpha");
        },
        [](const C& c) { return fmt_auto(c.alpha_auto, c.alpha); });

    // [link]
    add("link.p_tx_dbm",
        [](C& c, const std::string& v) { c.link.p_tx_dbm = parse_double(v, "p_tx_dbm"); },
        [](const C& c) { return fmt(c.link.p_tx_dbm); });
    add("link.g_tx_dbi",
        [](C& c, const std::string& v) { c.link.g_tx_dbi = parse_double(v, "g_tx_dbi"); },
        [](const C& c) { return fmt(c.link.g_tx_dbi); });
    add("link.g_rx_dbi",
        [](C& c, const std::string& v) { c.link.g_rx_dbi = parse_double(v, "g_rx_dbi"); },
        [](const C& c) { return fmt(c.link.g_rx_dbi); });
    add("link.f_rf_hz",
        [](C& c, const std::string& v) {
          double f = parse_double(v, "f_rf_hz");
          c.link.f_rf = f;
          c.env.f_rf = f;
        },
        [](const C& c) { return fmt(c.link.f_rf); });

    // [frontend]
    add("frontend.lna_gain_db",
        [](C& c, const std::string& v) { c.front.lna_gain_db = parse_double(v, "lna_gain_db"); },
        [](const C& c) { return fmt(c.front.lna_gain_db); });
    add("frontend.r_load_ohm",
        [](C& c, const std::string& v) { c.front.r_load = parse_double(v, "r_load_ohm"); },
        [](const C& c) { return fmt(c.front.r_load); });
    add("frontend.responsivity_a_w",
        [](C& c, const std::string& v) { c.front.responsivity = parse_double(v, "responsivity_a_w"); },
        [](const C& c) { return fmt(c.front.responsivity); });
    add("frontend.eta_eff",
        [](C& c, const std::string& v) { c.front.eta_eff = parse_double(v, "eta_eff"); },
        [](const C& c) { return fmt(c.front.eta_eff); });
    add("frontend.noise_figure",
        [](C& c, const std::string& v) { c.front.noise_figure = parse_double(v, "noise_figure"); },
        [](const C& c) { return fmt(c.front.noise_figure); });
    add("frontend.kind",
        [](C& c, const std::string& v) {
          std::string s = lower(trim(v));
          if (s == "tia")
            c.front.kind = FrontEndKind::tia;
          else if (s == "lna")
            c.front.kind = FrontEndKind::lna;
          else
            throw ParseError("frontend.kind: expected tia or lna, got '" + v + "'");
        },
        [](const C& c) { return c.front.kind == FrontEndKind::tia ? "tia" : "lna"; });
    add("frontend.psn_units",
        [](C& c, const std::string& v) {
          std::string s = lower(trim(v));
          if (s == "r_load")
            c.front.psn_units = PsnUnits::r_load;
          else if (s == "raw")
            c.front.psn_units = PsnUnits::raw;
          else
            throw ParseError("frontend.psn_units: expected r_load or raw, got '" + v + "'");
        },
        [](const C& c) { return c.front.psn_units == PsnUnits::r_load ? "r_load" : "raw"; });

    // [noise]
    add("noise.bandwidth_hz",
        [](C& c, const std::string& v) { c.env.bandwidth = parse_double(v, "bandwidth_hz"); },
        [](const C& c) { return fmt(c.env.bandwidth); });
    add("noise.detection_mode",
        [](C& c, const std::string& v) {
          std::string s = lower(trim(v));
          if (s == "heterodyne")
            c.env.detection_mode = DetectionMode::heterodyne;
          else if (s == "homodyne")
            c.env.detection_mode = DetectionMode::homodyne;
          else
            throw ParseError("noise.detection_mode: expected heterodyne or homodyne, got '" + v + "'");
        },
        [](const C& c) {
          return c.env.detection_mode == DetectionMode::heterodyne ? "heterodyne" : "homodyne";
        });
    add("noise.t2_s",
        [](C& c, const std::string& v) { c.env.t2 = parse_double(v, "t2_s"); },
        [](const C& c) { return fmt(c.env.t2); });
    add("noise.n_atoms",
        [](C& c, const std::string& v) {
          c.n_atoms_auto = is_auto(v);
          if (!c.n_atoms_auto) c.n_atoms = parse_double(v, "n_atoms");
        },
        [](const C& c) { return fmt_auto(c.n_atoms_auto, c.n_atoms); });
    add("noise.planck_convention",
        [](C& c, const std::string& v) {
          std::string s = lower(trim(v));
          if (s == "h")
            c.env.planck = PlanckConvention::h;
          else if (s == "hbar")
            c.env.planck = PlanckConvention::hbar;
          else
            throw ParseError("noise.planck_convention: expected h or hbar, got '" + v + "'");
        },
        [](const C& c) { return c.env.planck == PlanckConvention::h ? "h" : "hbar"; });
    add("noise.sql_mode",
        [](C& c, const std::string& v) { c.env.sql_mode = parse_bool(v, "sql_mode"); },
        [](const C& c) { return c.env.sql_mode ? "true" : "false"; });

    // [experiment]
    add("experiment.seed",
        [](C& c, const std::string& v) { c.seed = parse_u64(v, "seed"); },
        [](const C& c) { return std::to_string(c.seed); });
    add("experiment.workers",
        [](C& c, const std::string& v) { c.workers = static_cast<unsigned>(parse_u64(v, "workers")); },
        [](const C& c) { return std::to_string(c.workers); });
    add("experiment.solver",
        [](C& c, const std::string& v) {
          std::string s = lower(trim(v));
          if (s == "full")
            c.solver = SolverKind::full;
          else if (s == "closed_form")
            c.solver = SolverKind::closed_form;
          else
            throw ParseError("experiment.solver: expected full or closed_form, got '" + v + "'");
        },
        [](const C& c) { return c.solver == SolverKind::full ? "full" : "closed_form"; });
    add("experiment.doppler",
        [](C& c, const std::string& v) { c.doppler = parse_bool(v, "doppler"); },
        [](const C& c) { return c.doppler ? "true" : "false"; });
    add("experiment.gamma_fwhm_hz",
        [](C& c, const std::string& v) {
          c.gamma_fwhm_auto = is_auto(v);
          if (!c.gamma_fwhm_auto) c.gamma_fwhm_hz = parse_double(v, "gamma_fwhm_hz");
        },
        [](const C& c) { return fmt_auto(c.gamma_fwhm_auto, c.gamma_fwhm_hz); });
    add("experiment.kappa_mode",
        [](C& c, const std::string& v) {
          std::string s = lower(trim(v));
          if (s == "fixed")
            c.kappa_mode = KappaMode::fixed;
          else if (s == "adaptive")
            c.kappa_mode = KappaMode::adaptive;
          else
            throw ParseError("experiment.kappa_mode: expected fixed or adaptive, got '" + v + "'");
        },
        [](const C& c) { return c.kappa_mode == KappaMode::fixed ? "fixed" : "adaptive"; });
    add("experiment.conventional_snr_variant",
        [](C& c, const std::string& v) {
          std::string s = lower(trim(v));
          if (s == "paper")
            c.conv_variant = ConvSnrVariant::paper;
          else if (s == "symmetric")
            c.conv_variant = ConvSnrVariant::symmetric;
          else
            throw ParseError("experiment.conventional_snr_variant: expected paper or symmetric, got '" +
                             v + "'");
        },
        [](const C& c) { return c.conv_variant == ConvSnrVariant::paper ? "paper" : "symmetric"; });
    add("experiment.delta_c_span_hz",
        [](C& c, const std::string& v) { c.delta_c_span_hz = parse_double(v, "delta_c_span_hz"); },
        [](const C& c) { return fmt(c.delta_c_span_hz); });
    add("experiment.delta_c_points",
        [](C& c, const std::string& v) { c.delta_c_points = parse_size(v, "delta_c_points"); },
        [](const C& c) { return std::to_string(c.delta_c_points); });
    add("experiment.omega_rf_max_hz",
        [](C& c, const std::string& v) { c.omega_rf_max_hz = parse_double(v, "omega_rf_max_hz"); },
        [](const C& c) { return fmt(c.omega_rf_max_hz); });
    add("experiment.omega_rf_points",
        [](C& c, const std::string& v) { c.omega_rf_points = parse_size(v, "omega_rf_points"); },
        [](const C& c) { return std::to_string(c.omega_rf_points); });
    add("experiment.d_min_m",
        [](C& c, const std::string& v) { c.d_min_m = parse_double(v, "d_min_m"); },
        [](const C& c) { return fmt(c.d_min_m); });
    add("experiment.d_max_m",
        [](C& c, const std::string& v) { c.d_max_m = parse_double(v, "d_max_m"); },
        [](const C& c) { return fmt(c.d_max_m); });
    add("experiment.d_points",
        [](C& c, const std::string& v) { c.d_points = parse_size(v, "d_points"); },
        [](const C& c) { return std::to_string(c.d_points); });
    add("experiment.epsilon",
        [](C& c, const std::string& v) { c.epsilon = parse_double(v, "epsilon"); },
        [](const C& c) { return fmt(c.epsilon); });
    add("experiment.thd_points",
        [](C& c, const std::string& v) { c.thd_points = parse_size(v, "thd_points"); },
        [](const C& c) { return std::to_string(c.thd_points); });
    add("experiment.use_opt_lo",
        [](C& c, const std::string& v) { c.use_opt_lo = parse_bool(v, "use_opt_lo"); },
        [](const C& c) { return c.use_opt_lo ? "true" : "false"; });
    add("experiment.snr_min_db",
        [](C& c, const std::string& v) { c.snr_min_db = parse_double(v, "snr_min_db"); },
        [](const C& c) { return fmt(c.snr_min_db); });
    add("experiment.snr_max_db",
        [](C& c, const std::string& v) { c.snr_max_db = parse_double(v, "snr_max_db"); },
        [](const C& c) { return fmt(c.snr_max_db); });
    add("experiment.snr_points",
        [](C& c, const std::string& v) { c.snr_points = parse_size(v, "snr_points"); },
        [](const C& c) { return std::to_string(c.snr_points); });
    add("experiment.n_symbols",
        [](C& c, const std::string& v) { c.n_symbols = parse_size(v, "n_symbols"); },
        [](const C& c) { return std::to_string(c.n_symbols); });

    std::sort(t.begin(), t.end(), [](const KeyDesc& a, const KeyDesc& b) { return a.name < b.name; });
    return t;
  }();
  return table;
}

const KeyDesc* find_key(const std::string& name) {
  const auto& t = key_table();
  auto it = std::lower_bound(t.begin(), t.end(), name,
                             [](const KeyDesc& k, const std::string& n) { return k.name < n; });
  if (it == t.end() || it->name != name) return nullptr;
  return &*it;
}

const std::set<std::string>& known_sections() {
  static const std::set<std::string> s = {"atoms", "drives",   "probe", "link",
                                          "frontend", "noise", "experiment"};
  return s;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.drives.rf_drive = phys::two_pi * 6e6; // default LO-free operating Rabi
  return cfg;
}

void apply_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, const std::string& origin) {
  std::string name = section + "." + key;
  const KeyDesc* desc = find_key(name);
  if (!desc) throw UnknownKey("unknown key '" + name + "' (" + origin + ")");
  desc->set(cfg, value);
}

void parse_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = path + ":" + std::to_string(lineno);
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(where + ": malformed section header");
      section = lower(trim(t.substr(1, t.size() - 2)));
      if (!known_sections().count(section))
        throw UnknownKey(where + ": unknown section '" + section + "'");
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    if (section.empty()) throw ParseError(where + ": key before any [section]");
    std::string key = lower(trim(t.substr(0, eq)));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError(where + ": empty key");
    apply_key(cfg, section, key, value, where);
  }
}

void apply_env(ExperimentConfig& cfg) {
  const std::string prefix = "RYDLINK_";
  std::vector<std::pair<std::string, std::string>> overrides;
  for (char** e = environ; e && *e; ++e) {
    std::string entry(*e);
    if (entry.rfind(prefix, 0) != 0) continue;
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(prefix.size(), eq - prefix.size());
    std::string value = entry.substr(eq + 1);
    std::size_t us = name.find('_');
    if (us == std::string::npos) continue;
    std::string section = lower(name.substr(0, us));
    if (!known_sections().count(section)) continue; // unrelated RYDLINK_* vars
    std::string key = lower(name.substr(us + 1));
    overrides.emplace_back(section + "." + key, value);
  }
  std::sort(overrides.begin(), overrides.end());
  for (const auto& [name, value] : overrides) {
    std::size_t dot = name.find('.');
    apply_key(cfg, name.substr(0, dot), name.substr(dot + 1), value,
              "environment override RYDLINK_*");
  }
}

void validate_config(const ExperimentConfig& cfg) {
  cfg.sys.validate();
  cfg.drives.validate();
  cfg.link.validate();
  cfg.front.validate();
  cfg.env.validate();
  if (cfg.cell_length <= 0.0) throw ValidationError("cell_length must be positive");
  if (cfg.coupling_diam <= 0.0) throw ValidationError("coupling_diam_mm must be positive");
  if (!cfg.alpha_auto && cfg.alpha <= 0.0) throw ValidationError("alpha must be positive");
  if (!cfg.gamma_fwhm_auto && cfg.gamma_fwhm_hz <= 0.0)
    throw ValidationError("gamma_fwhm_hz must be positive");
  if (!cfg.n_atoms_auto && cfg.n_atoms < 1.0) throw ValidationError("n_atoms must be >= 1");
  if (cfg.omega_lo_hz <= 0.0) throw ValidationError("omega_lo_hz must be positive");
  if (cfg.delta_c_span_hz <= 0.0) throw ValidationError("delta_c_span_hz must be positive");
  if (cfg.delta_c_points < 5) throw ValidationError("delta_c_points must be >= 5");
  if (cfg.omega_rf_max_hz <= 0.0) throw ValidationError("omega_rf_max_hz must be positive");
  if (cfg.omega_rf_points < 2) throw ValidationError("omega_rf_points must be >= 2");
  if (cfg.d_min_m <= 0.0) throw ValidationError("d_min_m must be positive");
  if (cfg.d_max_m <= cfg.d_min_m) throw ValidationError("d_max_m must exceed d_min_m");
  if (cfg.d_points < 2) throw ValidationError("d_points must be >= 2");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ValidationError("epsilon must be in (0, 1)");
  if (cfg.thd_points < 5) throw ValidationError("thd_points must be >= 5");
  if (cfg.snr_max_db <= cfg.snr_min_db) throw ValidationError("snr_max_db must exceed snr_min_db");
  if (cfg.snr_points < 2) throw ValidationError("snr_points must be >= 2");
  if (cfg.n_symbols < 1) throw ValidationError("n_symbols must be >= 1");
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg = default_config();
  if (!path.empty()) parse_file(cfg, path);
  apply_env(cfg);
  validate_config(cfg);
  return cfg;
}

std::string canonical_dump(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& k : key_table()) {
    out += k.name;
    out += '=';
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a64(canonical_dump(cfg)); }

double measure_gamma_fwhm(const AtomicSystem& sys, const DriveFields& drives,
                          const ProbeGeometry& geom, bool doppler) {
  const double omega_rf = drives.omega_rf_mag();
  // hot-vapor quadrature cannot reach the default 1e-6: the absorption feature
  // is a few m/s wide against a ~135 m/s velocity spread, so percent-level is
  // the honest attainable accuracy and plenty for a linewidth readout
  const DopplerOptions dopts{64, 32768, 5e-2};
  const double span = phys::two_pi * 1.5e7 + 0.75 * omega_rf;
  const std::size_t n = std::max<std::size_t>(601, 1 + 2 * static_cast<std::size_t>(span / (phys::two_pi * 5e4)));
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = -span + 2.0 * span * static_cast<double>(i) / (n - 1);

  Spectrum spec;
  spec.delta_c = grid;
  spec.im_abs.resize(n);
  spec.p_out.resize(n);
  std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 16);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) {
          DriveFields d = drives;
          d.delta_c = grid[i];
          std::complex<double> rho21 = doppler ? doppler_average(sys, d, SolverKind::full, dopts)
                                               : rho21_of(SolverKind::full, sys, d);
          spec.im_abs[i] = absorptive_im(rho21);
          spec.p_out[i] = probe_transmission(geom, spec.im_abs[i]);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // under RF drive the linewidth is the width of one Autler-Townes component,
  // measured at the split position; with no drive it is the EIT peak width
  if (omega_rf > 0.0) return measure_peak_fwhm(spec, 0.5 * omega_rf);
  return measure_eit_fwhm(spec);
}

Scenario make_scenario(const ExperimentConfig& cfg) {
  Scenario s;
  s.sys = cfg.sys;
  s.drives = cfg.drives;
  s.link = cfg.link;
  s.front = cfg.front;
  s.env = cfg.env;
  s.solver = cfg.solver;
  s.conv_variant = cfg.conv_variant;
  s.h_mag2 = 1.0;
  s.geom = cfg.alpha_auto ? make_probe_geometry(cfg.sys, cfg.drives, cfg.cell_length)
                          : geometry_with_depth(cfg.sys, cfg.drives, cfg.alpha, cfg.cell_length);
  s.n_atoms = cfg.n_atoms_auto ? atom_number(cfg.sys, cfg.drives.beam_diam, cfg.cell_length)
                               : cfg.n_atoms;
  s.env.n_atoms = s.n_atoms;
  s.gamma_fwhm = cfg.gamma_fwhm_auto
                     ? measure_gamma_fwhm(cfg.sys, cfg.drives, s.geom, cfg.doppler)
                     : phys::two_pi * cfg.gamma_fwhm_hz;
  s.omega_lo = phys::two_pi * cfg.omega_lo_hz;
  return s;
}

} // namespace rydlink
