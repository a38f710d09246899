#include "rydlink/experiments.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

namespace rydlink {

namespace {

namespace fs = std::filesystem;

std::string e12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
  return out;
}

RunOutput write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
  return {path, fnv1a64(content)};
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  unsigned nw = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  nw = static_cast<unsigned>(std::min<std::size_t>(nw, std::max<std::size_t>(n, 1)));
  if (nw <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nw);
  for (unsigned t = 0; t < nw; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < n; i += nw) fn(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  double la = std::log(lo), lb = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

std::string file_stem(const std::string& which) {
  std::string s = which;
  for (char& c : s)
    if (c == '-') c = '_';
  return s;
}

struct CsvDoc {
  std::string text;

  void meta(const std::string& line) { text += "# " + line + "\n"; }
  void row(const std::vector<std::string>& fields) { text += join_csv(fields); }
};

void common_meta(CsvDoc& doc, const ExperimentConfig& cfg, const std::string& which) {
  doc.meta("rydlink " + which + " schema v1");
  doc.meta("config_hash=" + hex64(config_hash(cfg)));
  doc.meta("seed=" + std::to_string(cfg.seed));
}

std::string write_manifest(const ExperimentConfig& cfg, const std::string& which,
                           const std::string& out_dir, const std::vector<RunOutput>& outputs) {
  nlohmann::json j;
  j["experiment"] = which;
  j["tool_version"] = "rydlink 1.0.0";
  j["config_hash"] = hex64(config_hash(cfg));
  j["seed"] = cfg.seed;
  j["timestamp"] = iso_timestamp();
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : outputs) {
    j["outputs"].push_back({{"file", fs::path(o.path).filename().string()},
                            {"fnv1a64", hex64(o.checksum)}});
  }
  std::string path = (fs::path(out_dir) / (file_stem(which) + "_manifest.json")).string();
  write_file(path, j.dump(2) + "\n");
  return path;
}

// Shared noise/readout context for the budget-based experiments, mirroring
// sweep_snr_vs_distance's point evaluation.
struct BudgetContext {
  double a_eff;
  double a_conv;
  double f_probe;
  LinearizedReadout lin;
  NoiseBudget base; // extrinsic (a_eff), QPN, thermal; PSN filled per mode
};

BudgetContext budget_context(const Scenario& s) {
  BudgetContext ctx;
  ctx.a_eff = effective_aperture(s.sys, s.n_atoms, phys::two_pi * s.link.f_rf, s.gamma_fwhm);
  ctx.a_conv = conventional_aperture(s.link.f_rf, s.link.g_rx());
  ctx.f_probe = phys::c_light / s.drives.lambda_p;
  ctx.lin = linearized_readout(s.sys, s.drives, s.geom, s.omega_lo);
  NoiseEnvironment env = s.env;
  if (env.n_atoms < 1.0) env.n_atoms = s.n_atoms;
  ctx.base.sigma2_ex = sigma2_extrinsic(env, ctx.a_eff);
  ctx.base.sigma2_qpn = sigma2_qpn(env, s.sys.dip_rf, ctx.a_eff);
  ctx.base.sigma2_tn = sigma2_tn(env, s.front);
  return ctx;
}

RunResult run_spectrum(const ExperimentConfig& cfg, const std::string& out_dir) {
  Scenario s = make_scenario(cfg);
  std::vector<double> omega_rf =
      linspace(0.0, phys::two_pi * cfg.omega_rf_max_hz, cfg.omega_rf_points);
  double span = phys::two_pi * cfg.delta_c_span_hz;
  std::vector<double> delta_c = linspace(-span, span, cfg.delta_c_points);

  std::vector<Spectrum> specs(omega_rf.size());
  std::vector<SplittingResult> splits(omega_rf.size());
  parallel_for(omega_rf.size(), cfg.workers, [&](std::size_t i) {
    DriveFields d = s.drives;
    d.rf_drive = omega_rf[i];
    specs[i] = sweep_eit_spectrum(s.sys, d, delta_c, s.geom, s.solver, cfg.doppler);
    splits[i] = at_splitting_interval(specs[i]);
  });

  CsvDoc doc;
  common_meta(doc, cfg, "spectrum");
  doc.meta("gamma_fwhm_hz=" + e12(s.gamma_fwhm / phys::two_pi));
  doc.meta("alpha=" + e12(s.geom.c0 * s.geom.k_p * s.geom.length));
  doc.meta("columns: omega_rf_hz,delta_c_hz,im_abs,p_out_w,resolved,splitting_hz");
  doc.row({"omega_rf_hz", "delta_c_hz", "im_abs", "p_out_w", "resolved", "splitting_hz"});
  for (std::size_t i = 0; i < omega_rf.size(); ++i) {
    for (std::size_t j = 0; j < delta_c.size(); ++j) {
      doc.row({e12(omega_rf[i] / phys::two_pi), e12(delta_c[j] / phys::two_pi),
               e12(specs[i].im_abs[j]), e12(specs[i].p_out[j]),
               splits[i].resolved ? "1" : "0", e12(splits[i].omega_rf / phys::two_pi)});
    }
  }

  RunResult res;
  res.outputs.push_back(write_file((fs::path(out_dir) / "spectrum.csv").string(), doc.text));
  res.manifest_path = write_manifest(cfg, "spectrum", out_dir, res.outputs);
  res.summary = "spectrum: " + std::to_string(omega_rf.size()) + " RF columns x " +
                std::to_string(delta_c.size()) + " detunings";
  return res;
}

RunResult run_splitting_map(const ExperimentConfig& cfg, const std::string& out_dir) {
  Scenario s = make_scenario(cfg);
  std::vector<double> omega_rf =
      linspace(0.0, phys::two_pi * cfg.omega_rf_max_hz, cfg.omega_rf_points);
  double span = phys::two_pi * cfg.delta_c_span_hz;
  std::vector<double> delta_c = linspace(-span, span, cfg.delta_c_points);

  std::vector<SplittingResult> splits(omega_rf.size());
  parallel_for(omega_rf.size(), cfg.workers, [&](std::size_t i) {
    DriveFields d = s.drives;
    d.rf_drive = omega_rf[i];
    Spectrum spec = sweep_eit_spectrum(s.sys, d, delta_c, s.geom, s.solver, cfg.doppler);
    splits[i] = at_splitting_interval(spec);
  });

  CsvDoc doc;
  common_meta(doc, cfg, "splitting-map");
  doc.meta("gamma_fwhm_hz=" + e12(s.gamma_fwhm / phys::two_pi));
  doc.meta("columns: omega_rf_hz,r,splitting_hz,splitting_ratio,resolved");
  doc.row({"omega_rf_hz", "r", "splitting_hz", "splitting_ratio", "resolved"});
  std::size_t n_resolved = 0;
  for (std::size_t i = 0; i < omega_rf.size(); ++i) {
    double ratio = (splits[i].resolved && omega_rf[i] > 0.0)
                       ? splits[i].omega_rf / omega_rf[i]
                       : 0.0;
    if (splits[i].resolved) ++n_resolved;
    doc.row({e12(omega_rf[i] / phys::two_pi), e12(omega_rf[i] / s.gamma_fwhm),
             e12(splits[i].omega_rf / phys::two_pi), e12(ratio),
             splits[i].resolved ? "1" : "0"});
  }

  RunResult res;
  res.outputs.push_back(write_file((fs::path(out_dir) / "splitting_map.csv").string(), doc.text));
  res.manifest_path = write_manifest(cfg, "splitting-map", out_dir, res.outputs);
  res.summary = "splitting-map: " + std::to_string(n_resolved) + "/" +
                std::to_string(omega_rf.size()) + " points resolved";
  return res;
}

RunResult run_ldr(const ExperimentConfig& cfg, const std::string& out_dir) {
  Scenario s = make_scenario(cfg);
  LinearizedReadout probe_point = linearized_readout(s.sys, s.drives, s.geom, s.omega_lo);
  double omega_lo = cfg.use_opt_lo ? probe_point.omega_lo_opt : s.omega_lo;
  LinearizedReadout lin = linearized_readout(s.sys, s.drives, s.geom, omega_lo);

  NoiseEnvironment env = s.env;
  if (env.n_atoms < 1.0) env.n_atoms = s.n_atoms;
  double a_eff = effective_aperture(s.sys, s.n_atoms, phys::two_pi * s.link.f_rf, s.gamma_fwhm);
  NoiseBudget budget;
  budget.sigma2_ex = sigma2_extrinsic(env, a_eff);
  budget.sigma2_qpn = sigma2_qpn(env, s.sys.dip_rf, a_eff);
  budget.sigma2_tn = sigma2_tn(env, s.front);
  budget.sigma2_psn =
      sigma2_psn(s.front, lin.p_bar0, phys::c_light / s.drives.lambda_p, env.bandwidth);
  double sigma2 = compose_lo_dressed(budget, lin.kappa, s.front);
  double chain = s.front.g_lna() * s.front.r_load * s.front.responsivity * s.front.responsivity;
  double omega_min = std::sqrt(sigma2 / (chain * lin.kappa * lin.kappa));

  DynamicRange dr = dynamic_range(lin, cfg.epsilon, omega_min);
  double crossing = thd3_crossing(s.sys, s.drives, s.geom, omega_lo, cfg.epsilon);

  std::vector<double> grid = logspace(1e-3 * omega_lo, omega_lo, cfg.thd_points);
  struct Row {
    Harmonics h;
    double kappa_eff;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), cfg.workers, [&](std::size_t i) {
    BeatWaveform beat = probe_beat_signal(s.sys, s.drives, s.geom, omega_lo, grid[i]);
    rows[i].h = harmonic_spectrum(beat.p_exact);
    rows[i].kappa_eff = kappa_effective(s.sys, s.drives, s.geom, omega_lo, grid[i]);
  });

  CsvDoc doc;
  common_meta(doc, cfg, "ldr");
  doc.meta("omega_lo_hz=" + e12(omega_lo / phys::two_pi));
  doc.meta("omega_lo_opt_hz=" + e12(lin.omega_lo_opt / phys::two_pi));
  doc.meta("gamma_hwhm_hz=" + e12(lin.gamma_hwhm / phys::two_pi));
  doc.meta("alpha=" + e12(lin.alpha));
  doc.meta("p_bar0_w=" + e12(lin.p_bar0));
  doc.meta("kappa_w_s=" + e12(lin.kappa));
  doc.meta("kappa_rho_s=" + e12(lin.kappa_rho));
  doc.meta("epsilon=" + e12(cfg.epsilon));
  doc.meta("omega_rf_min_hz=" + e12(dr.omega_rf_min / phys::two_pi));
  doc.meta("omega_rf_max2_hz=" + e12(dr.omega_rf_max2 / phys::two_pi));
  doc.meta("omega_rf_max3_hz=" + e12(dr.omega_rf_max3 / phys::two_pi));
  doc.meta("thd3_crossing_hz=" + e12(crossing / phys::two_pi));
  doc.meta("columns: omega_rf_hz,thd3,h1_w,h2_w,h3_w,dc_w,kappa_eff_w_s");
  doc.row({"omega_rf_hz", "thd3", "h1_w", "h2_w", "h3_w", "dc_w", "kappa_eff_w_s"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Harmonics& h = rows[i].h;
    doc.row({e12(grid[i] / phys::two_pi), e12(4.0 * h.h3 / h.h1), e12(h.h1), e12(h.h2),
             e12(h.h3), e12(h.dc), e12(rows[i].kappa_eff)});
  }

  RunResult res;
  res.outputs.push_back(write_file((fs::path(out_dir) / "ldr.csv").string(), doc.text));
  res.manifest_path = write_manifest(cfg, "ldr", out_dir, res.outputs);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "ldr: THD3 crosses %.3g at omega_rf = %.6g Hz (third-order bound %.6g Hz)",
                cfg.epsilon, crossing / phys::two_pi, dr.omega_rf_max3 / phys::two_pi);
  res.summary = buf;
  return res;
}

RunResult run_snr_distance(const ExperimentConfig& cfg, const std::string& out_dir) {
  Scenario s = make_scenario(cfg);
  std::vector<double> grid = logspace(cfg.d_min_m, cfg.d_max_m, cfg.d_points);
  std::vector<PerfPoint> pts = sweep_snr_vs_distance(s, grid, cfg.workers);
  BudgetContext ctx = budget_context(s);

  auto db = [](double v) { return 10.0 * std::log10(v); };

  CsvDoc doc;
  common_meta(doc, cfg, "snr-distance");
  doc.meta("n_atoms=" + e12(s.n_atoms));
  doc.meta("gamma_fwhm_hz=" + e12(s.gamma_fwhm / phys::two_pi));
  doc.meta("a_eff_m2=" + e12(ctx.a_eff));
  doc.meta("a_conv_m2=" + e12(ctx.a_conv));
  doc.meta("kappa_fixed_w_s=" + e12(ctx.lin.kappa));
  doc.meta("sigma2_ex_w=" + e12(ctx.base.sigma2_ex));
  doc.meta("sigma2_qpn_w=" + e12(ctx.base.sigma2_qpn));
  doc.meta("sigma2_tn_w=" + e12(ctx.base.sigma2_tn));
  doc.meta(
      "columns: distance_m,omega_rf_rad_s,r,snr_ry,snr_ry_lo,snr_ry_lo_adaptive,snr_conv,"
      "snr_ry_sql,snr_ry_lo_sql,snr_ry_db,snr_ry_lo_db,snr_ry_lo_adaptive_db,snr_conv_db,"
      "snr_ry_sql_db,snr_ry_lo_sql_db,mi_lo_free_nats,mi_lo_dressed,ser_qam16");
  doc.row({"distance_m", "omega_rf_rad_s", "r", "snr_ry", "snr_ry_lo", "snr_ry_lo_adaptive",
           "snr_conv", "snr_ry_sql", "snr_ry_lo_sql", "snr_ry_db", "snr_ry_lo_db",
           "snr_ry_lo_adaptive_db", "snr_conv_db", "snr_ry_sql_db", "snr_ry_lo_sql_db",
           "mi_lo_free_nats", "mi_lo_dressed", "ser_qam16"});
  for (const PerfPoint& p : pts) {
    doc.row({e12(p.distance), e12(p.omega_rf), e12(p.resolvability_r), e12(p.snr_ry),
             e12(p.snr_ry_lo), e12(p.snr_ry_lo_adaptive), e12(p.snr_conv), e12(p.snr_ry_sql),
             e12(p.snr_ry_lo_sql), e12(db(p.snr_ry)), e12(db(p.snr_ry_lo)),
             e12(db(p.snr_ry_lo_adaptive)), e12(db(p.snr_conv)), e12(db(p.snr_ry_sql)),
             e12(db(p.snr_ry_lo_sql)), e12(p.mi_lo_free), e12(p.mi_lo_dressed), e12(p.ser)});
  }

  RunResult res;
  res.outputs.push_back(write_file((fs::path(out_dir) / "snr_distance.csv").string(), doc.text));
  res.manifest_path = write_manifest(cfg, "snr-distance", out_dir, res.outputs);
  char buf[160];
  std::snprintf(buf, sizeof buf, "snr-distance: %zu points, dressed-vs-conv gain %.1f dB at d=%.0f m",
                pts.size(), db(pts.front().snr_ry_lo / pts.front().snr_conv), pts.front().distance);
  res.summary = buf;
  return res;
}

RunResult run_mi(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::vector<double> snr_db = linspace(cfg.snr_min_db, cfg.snr_max_db, cfg.snr_points);

  CsvDoc doc;
  common_meta(doc, cfg, "mi");
  doc.meta("mi_lo_dressed_nats_raw = exp(1/snr) E1(1/snr); mi_lo_dressed applies the ln2 factor");
  doc.meta("columns: snr_db,snr,mi_lo_free_nats,mi_lo_dressed_nats_raw,mi_lo_dressed");
  doc.row({"snr_db", "snr", "mi_lo_free_nats", "mi_lo_dressed_nats_raw", "mi_lo_dressed"});
  for (double sdb : snr_db) {
    double snr = std::pow(10.0, sdb / 10.0);
    doc.row({e12(sdb), e12(snr), e12(mutual_info_lo_free(snr)),
             e12(mutual_info_lo_dressed_nats(snr)), e12(mutual_info_lo_dressed(snr))});
  }

  RunResult res;
  res.outputs.push_back(write_file((fs::path(out_dir) / "mi.csv").string(), doc.text));
  res.manifest_path = write_manifest(cfg, "mi", out_dir, res.outputs);
  res.summary = "mi: " + std::to_string(snr_db.size()) + " SNR points";
  return res;
}

RunResult run_ser(const ExperimentConfig& cfg, const std::string& out_dir) {
  Scenario s = make_scenario(cfg);
  LinearizedReadout lin = linearized_readout(s.sys, s.drives, s.geom, s.omega_lo);
  std::vector<double> snr_db = linspace(cfg.snr_min_db, cfg.snr_max_db, cfg.snr_points);

  struct McRow {
    double pam4;
    double qam16;
  };
  std::vector<McRow> mc(snr_db.size());
  parallel_for(snr_db.size(), cfg.workers, [&](std::size_t i) {
    double snr = std::pow(10.0, snr_db[i] / 10.0);
    CounterRng rng_pam(cfg.seed, i);
    CounterRng rng_qam(cfg.seed, 1000 + i);
    mc[i].pam4 = ser_monte_carlo_pam(s.sys, 4, snr, cfg.n_symbols, rng_pam);
    mc[i].qam16 =
        ser_monte_carlo_qam(s.sys, s.front, lin.kappa, 16, snr, cfg.n_symbols, rng_qam);
  });

  const int orders[] = {2, 4, 8, 16, 64};
  CsvDoc doc;
  common_meta(doc, cfg, "ser");
  doc.meta("n_symbols=" + std::to_string(cfg.n_symbols));
  doc.meta("kappa_w_s=" + e12(lin.kappa));
  std::vector<std::string> header = {"snr_db", "snr"};
  for (int m : orders) header.push_back("ser_pam" + std::to_string(m));
  for (int m : orders) header.push_back("ser_qam" + std::to_string(m));
  header.push_back("ser_pam4_mc");
  header.push_back("ser_qam16_mc");
  std::string cols;
  for (std::size_t i = 0; i < header.size(); ++i) cols += (i ? "," : "") + header[i];
  doc.meta("columns: " + cols);
  doc.row(header);
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    double snr = std::pow(10.0, snr_db[i] / 10.0);
    std::vector<std::string> fields = {e12(snr_db[i]), e12(snr)};
    for (int m : orders) fields.push_back(e12(ser_closed_form(Modulation::pam, m, snr)));
    for (int m : orders) fields.push_back(e12(ser_closed_form(Modulation::qam, m, snr)));
    fields.push_back(e12(mc[i].pam4));
    fields.push_back(e12(mc[i].qam16));
    doc.row(fields);
  }

  RunResult res;
  res.outputs.push_back(write_file((fs::path(out_dir) / "ser.csv").string(), doc.text));
  res.manifest_path = write_manifest(cfg, "ser", out_dir, res.outputs);
  res.summary = "ser: " + std::to_string(snr_db.size()) + " SNR points, " +
                std::to_string(cfg.n_symbols) + " symbols per Monte-Carlo cell";
  return res;
}

RunResult run_sensitivity(const ExperimentConfig& cfg, const std::string& out_dir) {
  Scenario s = make_scenario(cfg);
  NoiseEnvironment env = s.env;
  if (env.n_atoms < 1.0) env.n_atoms = s.n_atoms;
  double a_eff = effective_aperture(s.sys, s.n_atoms, phys::two_pi * s.link.f_rf, s.gamma_fwhm);
  double g_ry = g_ry_field_gain(s.sys, s.drives, s.geom, s.solver);
  double p_out = probe_transmission(s.geom, absorptive_im(rho21_of(s.solver, s.sys, s.drives)));

  NoiseBudget budget;
  budget.sigma2_ex = sigma2_extrinsic(env, a_eff);
  budget.sigma2_qpn = sigma2_qpn(env, s.sys.dip_rf, a_eff);
  budget.sigma2_tn = sigma2_tn(env, s.front);
  budget.sigma2_psn = sigma2_psn(s.front, p_out, phys::c_light / s.drives.lambda_p, env.bandwidth);
  double sigma2 = compose_lo_free(budget, g_ry, s.front, env.sql_mode);
  double e_min = sensitivity_lo_free(sigma2, a_eff, s.h_mag2, s.sys.dip_rf, s.gamma_fwhm);
  double e_min_uv_cm = e_min * 1e4;

  CsvDoc doc;
  common_meta(doc, cfg, "sensitivity");
  doc.meta(
      "columns: e_min_v_per_m,e_min_uv_per_cm,gamma_fwhm_hz,a_eff_m2,n_atoms,p_out_w,"
      "g_ry_w_per_v_m,sigma2_ex_w,sigma2_qpn_w,sigma2_psn_a2,sigma2_tn_w,sigma2_ry_w,bandwidth_hz");
  doc.row({"e_min_v_per_m", "e_min_uv_per_cm", "gamma_fwhm_hz", "a_eff_m2", "n_atoms", "p_out_w",
           "g_ry_w_per_v_m", "sigma2_ex_w", "sigma2_qpn_w", "sigma2_psn_a2", "sigma2_tn_w",
           "sigma2_ry_w", "bandwidth_hz"});
  doc.row({e12(e_min), e12(e_min_uv_cm), e12(s.gamma_fwhm / phys::two_pi), e12(a_eff),
           e12(s.n_atoms), e12(p_out), e12(g_ry), e12(budget.sigma2_ex), e12(budget.sigma2_qpn),
           e12(budget.sigma2_psn), e12(budget.sigma2_tn), e12(sigma2), e12(env.bandwidth)});

  RunResult res;
  res.outputs.push_back(write_file((fs::path(out_dir) / "sensitivity.csv").string(), doc.text));
  res.manifest_path = write_manifest(cfg, "sensitivity", out_dir, res.outputs);
  char buf[120];
  std::snprintf(buf, sizeof buf, "sensitivity: %.4f uV/cm/sqrt(Hz) at B = %.3g Hz", e_min_uv_cm,
                env.bandwidth);
  res.summary = buf;
  return res;
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& which,
                         const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir + " (" + ec.message() + ")");

  using Fn = RunResult (*)(const ExperimentConfig&, const std::string&);
  static const std::map<std::string, Fn> dispatch = {
      {"spectrum", run_spectrum},   {"splitting-map", run_splitting_map},
      {"ldr", run_ldr},             {"snr-distance", run_snr_distance},
      {"mi", run_mi},               {"ser", run_ser},
      {"sensitivity", run_sensitivity}};
  auto it = dispatch.find(which);
  if (it == dispatch.end())
    throw ValidationError("unknown experiment '" + which +
                          "' (expected spectrum, splitting-map, ldr, snr-distance, mi, ser, "
                          "sensitivity)");
  return it->second(cfg, out_dir);
}

} // namespace rydlink
