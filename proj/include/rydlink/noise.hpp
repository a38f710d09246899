#pragma once

#include "rydlink/receiver.hpp"
#include "rydlink/spectroscopy.hpp"

namespace rydlink {

struct NoiseEnvironment {
  double temperature = phys::temperature_default; // K
  double bandwidth = phys::bandwidth_default;     // Hz
  double f_rf = phys::f_rf_default;               // Hz
  DetectionMode detection_mode = DetectionMode::heterodyne;
  double n_atoms = 0.0;
  double t2 = phys::t2_coherence_default;         // s
  bool sql_mode = false;
  PlanckConvention planck = PlanckConvention::h;

  void validate() const {
    if (temperature <= 0.0) throw ValidationError("temperature must be positive");
    if (bandwidth <= 0.0) throw ValidationError("bandwidth must be positive");
    if (f_rf <= 0.0) throw ValidationError("carrier frequency must be positive");
    if (t2 <= 0.0) throw ValidationError("coherence time must be positive");
  }
};

struct NoiseBudget {
  double sigma2_ex = 0.0;   // W
  double sigma2_qpn = 0.0;  // W
  double sigma2_psn = 0.0;  // A^2, photocurrent domain
  double sigma2_tn = 0.0;   // W
  double sigma2_ry = 0.0;   // W, LO-free composite
  double sigma2_ry_lo = 0.0; // W, LO-dressed composite
  double sigma2_conv = 0.0; // W, reference receiver composite
};

// Mean thermal photon number of the RF mode.
double thermal_occupancy(double f_rf, double temperature);

// Quantum noise energy of the detection mode.
double theta_quantum(const NoiseEnvironment& env);

// Blackbody-driven extrinsic field noise, V/m/sqrt(Hz).
double nef_extrinsic(const NoiseEnvironment& env);

// Extrinsic noise expressed as received power in bandwidth B.
double sigma2_extrinsic(const NoiseEnvironment& env, double a_eff);

// Projection-noise field floor per root hertz, V/m.
double e_sql(const NoiseEnvironment& env, double dip_rf);

double sigma2_qpn(const NoiseEnvironment& env, double dip_rf, double a_eff);

// Photocurrent mean and shot noise (A, A^2).
double mean_photocurrent(const FrontEnd& front, double p_out, double f_probe);
double sigma2_psn(const FrontEnd& front, double p_out, double f_probe, double bandwidth);

double sigma2_tn(const NoiseEnvironment& env, const FrontEnd& front);

// Transduction gain dP_out/dE_RF at the operating point in drives.rf_drive,
// central difference with relative step 1e-4.
double g_ry_field_gain(const AtomicSystem& sys, const DriveFields& drives,
                       const ProbeGeometry& geom, SolverKind kind);

// Composite receiver noise. The PSN term enters through the front-end's
// psn_units policy (I^2 R_L conversion by default). sql_mode keeps only the
// atomic projection-noise floor, dropping extrinsic, shot, and thermal terms.
double compose_lo_free(const NoiseBudget& budget, double g_ry, const FrontEnd& front,
                       bool sql_mode = false);
double compose_lo_dressed(const NoiseBudget& budget, double kappa, const FrontEnd& front,
                          bool sql_mode = false);

// Reference heterodyne chain: G^2 sigma_ex^2 + sigma_TN^2 with the
// conventional aperture inside sigma_ex^2.
double compose_conventional(double sigma2_ex_conv, double sigma2_tn_w, const FrontEnd& front);

} // namespace rydlink
