#include "rydlink/performance.hpp"

#include "rydlink/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <thread>

namespace rydlink {

double penalty_g(double r) {
  if (r <= 0.0) return 0.0;
  double r2 = r * r;
  return r2 / (1.0 + 1.0 / (2.0 * r2));
}

ResolvabilityRatio resolvability(double omega_rf, double gamma_fwhm) {
  if (gamma_fwhm <= 0.0) throw ValidationError("resolvability needs gamma_fwhm > 0");
  double r = omega_rf / gamma_fwhm;
  return {r, penalty_g(r)};
}

double snr_lo_free(double p_rx, double h_mag2, double sigma2_ry, double dip_rf,
                   double gamma_fwhm, double omega_rf) {
  if (sigma2_ry <= 0.0) throw ValidationError("snr_lo_free needs sigma2_ry > 0");
  if (gamma_fwhm <= 0.0) throw ValidationError("snr_lo_free needs gamma_fwhm > 0");
  double scale = std::fabs(dip_rf) / (phys::hbar * gamma_fwhm);
  return p_rx * h_mag2 / sigma2_ry * scale * scale * penalty_g(omega_rf / gamma_fwhm);
}

double sensitivity_lo_free(double sigma2_ry, double a_eff, double h_mag2, double dip_rf,
                           double gamma_fwhm) {
  if (sigma2_ry <= 0.0) throw ValidationError("sensitivity_lo_free needs sigma2_ry > 0");
  if (a_eff <= 0.0) throw ValidationError("sensitivity_lo_free needs a_eff > 0");
  if (h_mag2 <= 0.0) throw ValidationError("sensitivity_lo_free needs h_mag2 > 0");
  if (gamma_fwhm <= 0.0 || dip_rf == 0.0)
    throw ValidationError("sensitivity_lo_free needs gamma_fwhm > 0 and a dipole moment");
  double ratio = 2.0 * phys::z0_free_space * sigma2_ry / (a_eff * h_mag2);
  return phys::hbar * gamma_fwhm / std::fabs(dip_rf) * std::pow(ratio, 0.25);
}

double snr_lo_dressed(double p_rx, double h_mag2, double sigma2_ry_lo, double kappa,
                      double dip_rf, const FrontEnd& front) {
  if (sigma2_ry_lo <= 0.0) throw ValidationError("snr_lo_dressed needs sigma2_ry_lo > 0");
  double scale = std::fabs(dip_rf) / phys::hbar;
  double chain = front.g_lna() * front.r_load * front.responsivity * front.responsivity;
  return chain * kappa * kappa * scale * scale * p_rx * h_mag2 / sigma2_ry_lo;
}

LambdaDerivs lambda_derivs(double omega_lo, double gamma_hwhm) {
  if (gamma_hwhm <= 0.0) throw ValidationError("lambda_derivs needs gamma_hwhm > 0");
  double a = omega_lo;
  double b2 = gamma_hwhm * gamma_hwhm;
  double den = b2 + a * a;
  LambdaDerivs out;
  out.d1 = -2.0 * b2 * a / (den * den);
  out.d2 = -2.0 * b2 * (b2 - 3.0 * a * a) / (den * den * den);
  out.d3 = 24.0 * b2 * a * (b2 - a * a) / (den * den * den * den);
  return out;
}

DynamicRange dynamic_range(const LinearizedReadout& readout, double epsilon,
                           double sensitivity_floor) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must be in (0, 1)");
  if (sensitivity_floor < 0.0) throw ValidationError("sensitivity floor must be >= 0");
  DynamicRange out;
  out.derivs = lambda_derivs(readout.omega_lo, readout.gamma_hwhm);
  out.thd_tolerance = epsilon;
  out.omega_rf_min = sensitivity_floor;
  double inf = std::numeric_limits<double>::infinity();
  double a1 = std::fabs(out.derivs.d1);
  out.omega_rf_max2 =
      out.derivs.d2 == 0.0 ? inf : 4.0 * epsilon * a1 / std::fabs(out.derivs.d2);
  out.omega_rf_max3 =
      out.derivs.d3 == 0.0 ? inf : std::sqrt(6.0 * epsilon * a1 / std::fabs(out.derivs.d3));
  return out;
}

namespace {

double thd3_of(const AtomicSystem& sys, const DriveFields& drives, const ProbeGeometry& geom,
               double omega_lo, double omega_rf) {
  BeatWaveform beat = probe_beat_signal(sys, drives, geom, omega_lo, omega_rf);
  Harmonics h = harmonic_spectrum(beat.p_exact);
  if (h.h1 <= 1e-300) throw NumericalError("beat fundamental vanished in THD scan");
  return 4.0 * h.h3 / h.h1;
}

} // namespace

double thd3_crossing(const AtomicSystem& sys, const DriveFields& drives,
                     const ProbeGeometry& geom, double omega_lo, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must be in (0, 1)");
  if (omega_lo <= 0.0) throw ValidationError("thd3_crossing needs omega_lo > 0");
  const int n_scan = 61;
  double lg_lo = std::log(1e-3 * omega_lo);
  double lg_hi = std::log(omega_lo);
  double prev_x = 0.0, prev_f = -epsilon;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int i = 0; i < n_scan; ++i) {
    double x = std::exp(lg_lo + (lg_hi - lg_lo) * i / (n_scan - 1));
    double f = thd3_of(sys, drives, geom, omega_lo, x) - epsilon;
    if (i == 0 && f >= 0.0)
      throw NumericalError("distortion already above tolerance at the scan floor");
    if (f >= 0.0) {
      lo = prev_x;
      hi = x;
      bracketed = true;
      break;
    }
    prev_x = x;
    prev_f = f;
  }
  (void)prev_f;
  if (!bracketed) throw NumericalError("distortion never reached tolerance below omega_lo");
  for (int it = 0; it < 60; ++it) {
    double mid = std::sqrt(lo * hi);
    double f = thd3_of(sys, drives, geom, omega_lo, mid) - epsilon;
    if (f >= 0.0)
      hi = mid;
    else
      lo = mid;
    if (hi / lo - 1.0 < 1e-10) break;
  }
  return std::sqrt(lo * hi);
}

double mutual_info_lo_free(double snr) {
  if (snr < 0.0) throw ValidationError("mutual_info_lo_free needs snr >= 0");
  double r = snr;
  return 0.5 * std::log(phys::pi * (r + 1.0) / 2.0) - sf::ln_bessel_i0(r) +
         r * sf::bessel_i1_over_i0(r);
}

double mutual_info_lo_dressed_nats(double snr) {
  if (snr < 0.0) throw ValidationError("mutual_info_lo_dressed needs snr >= 0");
  if (snr == 0.0) return 0.0;
  return sf::exp1_scaled(1.0 / snr);
}

double mutual_info_lo_dressed(double snr) {
  return mutual_info_lo_dressed_nats(snr) * std::log(2.0);
}

namespace {

constexpr int kOrders[] = {2, 4, 8, 16, 64};

void check_order(int order) {
  for (int m : kOrders)
    if (order == m) return;
  throw UnsupportedOrder("constellation order must be one of 2, 4, 8, 16, 64");
}

} // namespace

double ser_closed_form(Modulation mod, int order, double snr) {
  check_order(order);
  if (snr < 0.0) throw ValidationError("ser_closed_form needs snr >= 0");
  double m = order;
  if (mod == Modulation::pam) {
    return 2.0 * (m - 1.0) / m * sf::q_function(std::sqrt(6.0 * snr / (m * m - 1.0)));
  }
  double q = sf::q_function(std::sqrt(3.0 * snr / (m - 1.0)));
  double inner = 2.0 * (1.0 - 1.0 / std::sqrt(m)) * q;
  double correct = 1.0 - inner;
  return 1.0 - correct * correct;
}

double ser_monte_carlo_pam(const AtomicSystem& sys, int order, double snr,
                           std::size_t n_symbols, CounterRng& rng) {
  check_order(order);
  if (snr < 0.0) throw ValidationError("ser_monte_carlo_pam needs snr >= 0");
  if (n_symbols == 0) throw ValidationError("ser_monte_carlo_pam needs n_symbols > 0");
  const double sigma2 = 1.0;
  const double m = order;
  double spacing = std::sqrt(12.0 * sigma2 * snr / (m * m - 1.0));
  double scale = std::fabs(sys.dip_rf) / phys::hbar;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < n_symbols; ++i) {
    int k = std::min(order - 1, static_cast<int>(rng.uniform() * order));
    std::complex<double> symbol(k * spacing, 0.0);
    double z = observe_lo_free(sys, symbol, sigma2, rng);
    int khat = static_cast<int>(std::lround(z / (scale * spacing)));
    khat = std::clamp(khat, 0, order - 1);
    if (khat != k) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(n_symbols);
}

double ser_monte_carlo_qam(const AtomicSystem& sys, const FrontEnd& front, double kappa,
                           int order, double snr, std::size_t n_symbols, CounterRng& rng) {
  check_order(order);
  int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  if (side * side != order)
    throw UnsupportedOrder("Monte-Carlo QAM needs a square constellation (4, 16, 64)");
  if (snr < 0.0) throw ValidationError("ser_monte_carlo_qam needs snr >= 0");
  if (n_symbols == 0) throw ValidationError("ser_monte_carlo_qam needs n_symbols > 0");
  const double sigma2 = 1.0;
  double gain = std::sqrt(front.g_lna() * front.r_load) * front.responsivity *
                std::fabs(kappa) * std::fabs(sys.dip_rf) / phys::hbar;
  if (gain <= 0.0) throw ValidationError("ser_monte_carlo_qam needs a nonzero chain gain");
  double d = std::sqrt(3.0 * sigma2 * snr / (2.0 * (order - 1.0))) / gain;
  auto level = [&](int idx) { return (2 * idx - (side - 1)) * d; };
  std::size_t errors = 0;
  for (std::size_t i = 0; i < n_symbols; ++i) {
    int ka = std::min(side - 1, static_cast<int>(rng.uniform() * side));
    int kb = std::min(side - 1, static_cast<int>(rng.uniform() * side));
    std::complex<double> e_symbol(level(ka), level(kb));
    std::complex<double> z = observe_lo_dressed(sys, front, kappa, e_symbol, sigma2, rng);
    auto decode = [&](double u) {
      int idx = static_cast<int>(std::lround((u / (gain * d) + (side - 1)) / 2.0));
      return std::clamp(idx, 0, side - 1);
    };
    if (decode(z.real()) != ka || decode(z.imag()) != kb) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(n_symbols);
}

std::vector<PerfPoint> sweep_snr_vs_distance(const Scenario& scenario,
                                             const std::vector<double>& d_grid,
                                             unsigned workers) {
  scenario.sys.validate();
  scenario.drives.validate();
  scenario.link.validate();
  scenario.front.validate();
  scenario.env.validate();
  if (scenario.gamma_fwhm <= 0.0) throw ValidationError("scenario gamma_fwhm unresolved");
  if (scenario.n_atoms < 1.0) throw ValidationError("scenario n_atoms unresolved");
  if (scenario.omega_lo <= 0.0) throw ValidationError("scenario omega_lo unresolved");
  if (scenario.geom.p_in <= 0.0) throw ValidationError("scenario geometry unresolved");
  for (double d : d_grid)
    if (d <= 0.0) throw ValidationError("distances must be positive");

  NoiseEnvironment env = scenario.env;
  if (env.n_atoms < 1.0) env.n_atoms = scenario.n_atoms;

  const double omega_rf_angular = phys::two_pi * scenario.link.f_rf;
  const double a_eff =
      effective_aperture(scenario.sys, scenario.n_atoms, omega_rf_angular, scenario.gamma_fwhm);
  const double a_conv = conventional_aperture(scenario.link.f_rf, scenario.link.g_rx());
  const double f_probe = phys::c_light / scenario.drives.lambda_p;

  LinearizedReadout lin =
      linearized_readout(scenario.sys, scenario.drives, scenario.geom, scenario.omega_lo);

  NoiseBudget base;
  base.sigma2_ex = sigma2_extrinsic(env, a_eff);
  base.sigma2_qpn = sigma2_qpn(env, scenario.sys.dip_rf, a_eff);
  base.sigma2_tn = sigma2_tn(env, scenario.front);

  NoiseBudget budget_lo = base;
  budget_lo.sigma2_psn = sigma2_psn(scenario.front, lin.p_bar0, f_probe, env.bandwidth);
  const double sigma2_lo_fixed = compose_lo_dressed(budget_lo, lin.kappa, scenario.front);
  const double sigma2_lo_sql = compose_lo_dressed(budget_lo, lin.kappa, scenario.front, true);

  const double sigma2_ex_conv = sigma2_extrinsic(env, a_conv);
  const double sigma2_conv = compose_conventional(sigma2_ex_conv, base.sigma2_tn, scenario.front);

  std::vector<PerfPoint> out(d_grid.size());
  auto eval_point = [&](std::size_t i) {
    PerfPoint pt;
    double d = d_grid[i];
    pt.distance = d;
    double flux = power_flux(scenario.link, d);
    double e_inc = incident_field(flux);
    double omega_rf = rabi_from_field(scenario.sys, e_inc);
    pt.omega_rf = omega_rf;
    pt.resolvability_r = omega_rf / scenario.gamma_fwhm;

    DriveFields drives_free = scenario.drives;
    drives_free.rf_drive = omega_rf;
    double g_ry = g_ry_field_gain(scenario.sys, drives_free, scenario.geom, scenario.solver);
    double im_abs =
        absorptive_im(rho21_of(scenario.solver, scenario.sys, drives_free));
    double p_out_op = probe_transmission(scenario.geom, im_abs);
    NoiseBudget budget_free = base;
    budget_free.sigma2_psn = sigma2_psn(scenario.front, p_out_op, f_probe, env.bandwidth);
    double sigma2_free = compose_lo_free(budget_free, g_ry, scenario.front);
    double sigma2_free_sql = compose_lo_free(budget_free, g_ry, scenario.front, true);

    double p_rx = received_power(flux, a_eff);
    pt.snr_ry = snr_lo_free(p_rx, scenario.h_mag2, sigma2_free, scenario.sys.dip_rf,
                            scenario.gamma_fwhm, omega_rf);
    pt.snr_ry_sql = snr_lo_free(p_rx, scenario.h_mag2, sigma2_free_sql, scenario.sys.dip_rf,
                                scenario.gamma_fwhm, omega_rf);

    double field2 = 2.0 * phys::z0_free_space * flux;
    pt.snr_ry_lo = snr_lo_dressed(field2, scenario.h_mag2, sigma2_lo_fixed, lin.kappa,
                                  scenario.sys.dip_rf, scenario.front);
    pt.snr_ry_lo_sql = snr_lo_dressed(field2, scenario.h_mag2, sigma2_lo_sql, lin.kappa,
                                      scenario.sys.dip_rf, scenario.front);

    double kappa_ad = kappa_effective(scenario.sys, scenario.drives, scenario.geom,
                                      scenario.omega_lo, omega_rf);
    double sigma2_lo_ad = compose_lo_dressed(budget_lo, kappa_ad, scenario.front);
    pt.snr_ry_lo_adaptive = snr_lo_dressed(field2, scenario.h_mag2, sigma2_lo_ad, kappa_ad,
                                           scenario.sys.dip_rf, scenario.front);

    pt.snr_conv = snr_conventional(received_power(flux, a_conv), scenario.h_mag2,
                                   scenario.front, sigma2_conv, scenario.conv_variant);

    pt.mi_lo_free = mutual_info_lo_free(pt.snr_ry);
    pt.mi_lo_dressed = mutual_info_lo_dressed(pt.snr_ry_lo);
    pt.ser = ser_closed_form(Modulation::qam, 16, pt.snr_ry_lo);
    out[i] = pt;
  };

  unsigned n_workers = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  n_workers = std::min<unsigned>(n_workers, std::max<std::size_t>(d_grid.size(), 1));
  if (n_workers <= 1 || d_grid.size() <= 1) {
    for (std::size_t i = 0; i < d_grid.size(); ++i) eval_point(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < d_grid.size(); i += n_workers) eval_point(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

} // namespace rydlink
