#include "rydlink/receiver.hpp"

#include "rydlink/errors.hpp"

#include <cmath>

namespace rydlink {

double power_flux(const LinkBudget& link, double distance) {
  link.validate();
  if (distance <= 0.0) throw ValidationError("distance must be positive");
  return link.p_tx_w() * link.g_tx() / (4.0 * phys::pi * distance * distance);
}

double incident_field(double flux) {
  if (flux < 0.0) throw ValidationError("flux must be nonnegative");
  return std::sqrt(2.0 * phys::z0_free_space * flux);
}

double received_power(double flux, double a_eff) {
  if (flux < 0.0 || a_eff < 0.0) throw ValidationError("flux and aperture must be nonnegative");
  return flux * a_eff;
}

double conventional_aperture(double f_rf, double g_rx_linear) {
  if (f_rf <= 0.0 || g_rx_linear <= 0.0) throw ValidationError("frequency and gain must be positive");
  double lambda = phys::c_light / f_rf;
  return lambda * lambda * g_rx_linear / (4.0 * phys::pi);
}

double effective_aperture(const AtomicSystem& sys, double n_atoms, double omega_rf_angular,
                          double gamma_fwhm) {
  if (n_atoms < 0.0) throw ValidationError("atom number must be nonnegative");
  if (gamma_fwhm <= 0.0) throw ValidationError("linewidth must be positive");
  double dip2 = sys.dip_rf * sys.dip_rf;
  return 2.0 * phys::z0_free_space * n_atoms * dip2 * omega_rf_angular /
         (phys::hbar * gamma_fwhm);
}

double rabi_from_field(const AtomicSystem& sys, double e_field) {
  if (e_field < 0.0) throw ValidationError("field magnitude must be nonnegative");
  return std::fabs(sys.dip_rf) * e_field / phys::hbar;
}

double atom_number(const AtomicSystem& sys, double beam_diam, double length) {
  if (beam_diam <= 0.0 || length <= 0.0) throw ValidationError("beam geometry must be positive");
  double radius = 0.5 * beam_diam;
  return sys.density * phys::pi * radius * radius * length;
}

double observe_lo_free(const AtomicSystem& sys, std::complex<double> symbol, double sigma2,
                       CounterRng& rng) {
  if (sigma2 < 0.0) throw ValidationError("noise variance must be nonnegative");
  std::complex<double> n = sigma2 > 0.0 ? rng.complex_normal(sigma2) : std::complex<double>{0.0, 0.0};
  return std::fabs(sys.dip_rf) / phys::hbar * std::abs(symbol + n);
}

std::complex<double> observe_lo_dressed(const AtomicSystem& sys, const FrontEnd& front,
                                        double kappa, std::complex<double> e_symbol,
                                        double sigma2, CounterRng& rng) {
  front.validate();
  if (sigma2 < 0.0) throw ValidationError("noise variance must be nonnegative");
  double gain = std::sqrt(front.g_lna() * front.r_load) * front.responsivity * std::fabs(kappa) *
                std::fabs(sys.dip_rf) / phys::hbar;
  std::complex<double> n = sigma2 > 0.0 ? rng.complex_normal(sigma2) : std::complex<double>{0.0, 0.0};
  return gain * e_symbol + n;
}

double snr_conventional(double p_rx, double h_mag2, const FrontEnd& front, double sigma2_conv,
                        ConvSnrVariant variant) {
  front.validate();
  if (p_rx < 0.0 || h_mag2 < 0.0) throw ValidationError("power and channel gain must be nonnegative");
  if (sigma2_conv <= 0.0) throw ValidationError("conventional noise variance must be positive");
  double g = front.g_lna();
  double num = (variant == ConvSnrVariant::paper) ? g : g * g;
  return num * p_rx * h_mag2 / sigma2_conv;
}

} // namespace rydlink
