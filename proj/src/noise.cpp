#include "rydlink/noise.hpp"

#include "rydlink/errors.hpp"

#include <cmath>

namespace rydlink {

double thermal_occupancy(double f_rf, double temperature) {
  if (f_rf <= 0.0 || temperature <= 0.0)
    throw ValidationError("thermal occupancy needs positive frequency and temperature");
  double x = phys::hbar * phys::two_pi * f_rf / (phys::k_boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double theta_quantum(const NoiseEnvironment& env) {
  env.validate();
  double quantum = (env.planck == PlanckConvention::h) ? phys::planck_h * env.f_rf
                                                       : phys::hbar * env.f_rf;
  double n = thermal_occupancy(env.f_rf, env.temperature);
  if (env.detection_mode == DetectionMode::heterodyne) return quantum * (2.0 * n + 1.0);
  return quantum * (0.5 * n + 0.5);
}

double nef_extrinsic(const NoiseEnvironment& env) {
  double f = env.f_rf;
  double pref = 16.0 * phys::pi * f * f / (3.0 * phys::eps0 * std::pow(phys::c_light, 3));
  return std::sqrt(pref * theta_quantum(env));
}

double sigma2_extrinsic(const NoiseEnvironment& env, double a_eff) {
  if (a_eff < 0.0) throw ValidationError("aperture must be nonnegative");
  double nef = nef_extrinsic(env);
  return nef * nef / (2.0 * phys::z0_free_space) * a_eff * env.bandwidth;
}

double e_sql(const NoiseEnvironment& env, double dip_rf) {
  env.validate();
  if (env.n_atoms < 1.0) throw ValidationError("SQL floor needs n_atoms >= 1");
  if (dip_rf == 0.0) throw ValidationError("dipole moment must be nonzero");
  return phys::hbar / (std::fabs(dip_rf) * std::sqrt(env.n_atoms * env.t2));
}

double sigma2_qpn(const NoiseEnvironment& env, double dip_rf, double a_eff) {
  if (a_eff < 0.0) throw ValidationError("aperture must be nonnegative");
  double e = e_sql(env, dip_rf);
  return e * e * a_eff * env.bandwidth / (2.0 * phys::z0_free_space);
}

double mean_photocurrent(const FrontEnd& front, double p_out, double f_probe) {
  front.validate();
  if (p_out < 0.0) throw ValidationError("optical power must be nonnegative");
  if (f_probe <= 0.0) throw ValidationError("probe frequency must be positive");
  return front.eta_eff * phys::elementary_charge * p_out / (phys::two_pi * phys::hbar * f_probe);
}

double sigma2_psn(const FrontEnd& front, double p_out, double f_probe, double bandwidth) {
  if (bandwidth < 0.0) throw ValidationError("bandwidth must be nonnegative");
  double ibar = mean_photocurrent(front, p_out, f_probe);
  return 2.0 * phys::elementary_charge * bandwidth * ibar;
}

// Total over bandwidth >= 0: the zero-bandwidth limit is a meaningful value
// even though a full NoiseEnvironment requires strictly positive bandwidth.
double sigma2_tn(const NoiseEnvironment& env, const FrontEnd& front) {
  front.validate();
  if (env.temperature <= 0.0) throw ValidationError("temperature must be positive");
  if (env.bandwidth < 0.0) throw ValidationError("bandwidth must be nonnegative");
  double ktb = phys::k_boltzmann * env.temperature * env.bandwidth;
  if (front.kind == FrontEndKind::tia) return 4.0 * ktb;
  return front.noise_figure * ktb;
}

double g_ry_field_gain(const AtomicSystem& sys, const DriveFields& drives,
                       const ProbeGeometry& geom, SolverKind kind) {
  double omega0 = drives.omega_rf_mag();
  if (omega0 <= 0.0) throw ZeroInput("transduction gain needs a nonzero RF operating point");
  double e0 = phys::hbar * omega0 / std::fabs(sys.dip_rf);
  const double rel = 1e-4;

  auto p_at = [&](double scale) {
    DriveFields d = drives;
    d.rf_drive = drives.rf_drive * scale;
    return probe_transmission(geom, absorptive_im(rho21_of(kind, sys, d)));
  };
  double p_plus = p_at(1.0 + rel);
  double p_minus = p_at(1.0 - rel);
  return (p_plus - p_minus) / (2.0 * rel * e0);
}

namespace {

double psn_as_power(const NoiseBudget& budget, const FrontEnd& front) {
  if (front.psn_units == PsnUnits::r_load) return budget.sigma2_psn * front.r_load;
  return budget.sigma2_psn;
}

} // namespace

double compose_lo_free(const NoiseBudget& budget, double g_ry, const FrontEnd& front,
                       bool sql_mode) {
  front.validate();
  double d2 = front.responsivity * front.responsivity;
  double g2 = front.g_lna() * front.g_lna();
  double qpn = d2 * g2 * budget.sigma2_qpn;
  if (sql_mode) return qpn;
  double psn = psn_as_power(budget, front);
  return g_ry * g_ry * d2 * g2 * budget.sigma2_ex + qpn + g2 * psn + budget.sigma2_tn;
}

double compose_lo_dressed(const NoiseBudget& budget, double kappa, const FrontEnd& front,
                          bool sql_mode) {
  return compose_lo_free(budget, kappa, front, sql_mode);
}

double compose_conventional(double sigma2_ex_conv, double sigma2_tn_w, const FrontEnd& front) {
  front.validate();
  if (sigma2_ex_conv < 0.0 || sigma2_tn_w < 0.0)
    throw ValidationError("noise constituents must be nonnegative");
  double g2 = front.g_lna() * front.g_lna();
  return g2 * sigma2_ex_conv + sigma2_tn_w;
}

} // namespace rydlink
