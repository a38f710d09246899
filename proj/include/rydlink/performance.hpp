#pragma once

#include "rydlink/noise.hpp"

#include <cstdint>
#include <vector>

namespace rydlink {

// Everything needed to evaluate one receiver configuration end to end.
struct Scenario {
  AtomicSystem sys;
  DriveFields drives;
  LinkBudget link;
  FrontEnd front;
  NoiseEnvironment env;
  ProbeGeometry geom{};
  SolverKind solver = SolverKind::full;
  double gamma_fwhm = 0.0;  // rad/s, resolved before use
  double n_atoms = 0.0;     // resolved before use
  double omega_lo = 0.0;    // rad/s, LO operating point
  double h_mag2 = 1.0;      // deterministic channel gain for sweeps
  ConvSnrVariant conv_variant = ConvSnrVariant::paper;
};

struct ResolvabilityRatio {
  double r;
  double g_of_r;
};

// Resolvability penalty G(r) = r^2 / (1 + 1/(2 r^2)), continuous at 0.
double penalty_g(double r);

ResolvabilityRatio resolvability(double omega_rf, double gamma_fwhm);

double snr_lo_free(double p_rx, double h_mag2, double sigma2_ry, double dip_rf,
                   double gamma_fwhm, double omega_rf);

// Minimum detectable field (V/m at the budget's bandwidth; per root hertz
// when the budget was composed with B = 1 Hz).
double sensitivity_lo_free(double sigma2_ry, double a_eff, double h_mag2, double dip_rf,
                           double gamma_fwhm);

// Dressed-chain SNR. p_rx here is the field-referred received power 2 Z0 S
// (V/m squared), the reading under which the Monte-Carlo observation chain
// reproduces this expression exactly.
double snr_lo_dressed(double p_rx, double h_mag2, double sigma2_ry_lo, double kappa,
                      double dip_rf, const FrontEnd& front);

struct LambdaDerivs {
  double d1; // dLambda/dOmega at the LO point, 1/(rad/s)
  double d2;
  double d3;
};

LambdaDerivs lambda_derivs(double omega_lo, double gamma_hwhm);

struct DynamicRange {
  double omega_rf_min;  // rad/s
  double omega_rf_max2; // rad/s, infinite at the optimum where d2 = 0
  double omega_rf_max3; // rad/s
  double thd_tolerance;
  LambdaDerivs derivs;
};

DynamicRange dynamic_range(const LinearizedReadout& readout, double epsilon,
                           double sensitivity_floor);

// Omega_RF at which the measured third-harmonic distortion 4 H3/H1 of the
// exact beat waveform first exceeds epsilon (log-spaced scan + bisection).
double thd3_crossing(const AtomicSystem& sys, const DriveFields& drives,
                     const ProbeGeometry& geom, double omega_lo, double epsilon);

// Closed-form mutual information of the magnitude readout, nats.
double mutual_info_lo_free(double snr);

// Ergodic formula for the linear readout: e^{1/s} E1(1/s), in nats, and the
// printed variant with the ln 2 factor attached.
double mutual_info_lo_dressed_nats(double snr);
double mutual_info_lo_dressed(double snr);

enum class Modulation { pam, qam };

double ser_closed_form(Modulation mod, int order, double snr);

// Monte-Carlo SER through the actual observation chains. The PAM detector
// uses midpoint thresholds on the magnitude; QAM uses nearest-neighbor on
// the complex plane. `snr` follows the bipolar-equivalent convention that
// makes the Gaussian-limit MC coincide with ser_closed_form.
double ser_monte_carlo_pam(const AtomicSystem& sys, int order, double snr,
                           std::size_t n_symbols, CounterRng& rng);
double ser_monte_carlo_qam(const AtomicSystem& sys, const FrontEnd& front, double kappa,
                           int order, double snr, std::size_t n_symbols, CounterRng& rng);

struct PerfPoint {
  double distance = 0.0;
  double snr_ry = 0.0;          // LO-free
  double snr_ry_lo = 0.0;       // LO-dressed, fixed kappa
  double snr_ry_lo_adaptive = 0.0;
  double snr_conv = 0.0;
  double snr_ry_sql = 0.0;      // LO-free, quantum-limited budget
  double snr_ry_lo_sql = 0.0;   // LO-dressed, quantum-limited budget
  double mi_lo_free = 0.0;
  double mi_lo_dressed = 0.0;
  double ser = 0.0;
  double omega_rf = 0.0;        // operating Rabi at this distance
  double resolvability_r = 0.0;
};

// Fig.-7-style distance sweep: every receiver family evaluated on the same
// link, kappa both fixed (at the scenario LO point) and adaptive (exact
// local slope), plus quantum-limited variants.
std::vector<PerfPoint> sweep_snr_vs_distance(const Scenario& scenario,
                                             const std::vector<double>& d_grid,
                                             unsigned workers = 0);

} // namespace rydlink
