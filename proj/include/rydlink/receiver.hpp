#pragma once

#include "rydlink/atomic_system.hpp"
#include "rydlink/rng.hpp"

#include <complex>

namespace rydlink {

enum class FrontEndKind { tia, lna };
enum class PsnUnits { r_load, raw };
enum class DetectionMode { homodyne, heterodyne };
enum class PlanckConvention { h, hbar };
enum class ConvSnrVariant { paper, symmetric };

// Photodetector plus amplification chain shared by all receiver modes.
struct FrontEnd {
  double lna_gain_db = phys::lna_gain_db_default;
  double r_load = phys::load_resistance_default;        // ohm
  double responsivity = phys::pd_responsivity_default;  // A/W
  double eta_eff = phys::quantum_efficiency_default;
  double noise_figure = phys::lna_noise_figure_default; // linear F
  FrontEndKind kind = FrontEndKind::tia;
  PsnUnits psn_units = PsnUnits::r_load;

  double g_lna() const { return std::pow(10.0, lna_gain_db / 10.0); }

  void validate() const {
    if (r_load <= 0.0) throw ValidationError("load resistance must be positive");
    if (responsivity <= 0.0) throw ValidationError("responsivity must be positive");
    if (eta_eff <= 0.0 || eta_eff > 1.0) throw ValidationError("quantum efficiency must be in (0, 1]");
    if (noise_figure < 1.0) throw ValidationError("noise figure must be >= 1");
  }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

// Transmit side and path of the wireless link.
struct LinkBudget {
  double p_tx_dbm = phys::p_tx_dbm_default;
  double g_tx_dbi = phys::antenna_gain_dbi_default;
  double g_rx_dbi = phys::antenna_gain_dbi_default;
  double f_rf = phys::f_rf_default; // Hz

  double p_tx_w() const { return dbm_to_watt(p_tx_dbm); }
  double g_tx() const { return db_to_linear(g_tx_dbi); }
  double g_rx() const { return db_to_linear(g_rx_dbi); }
  double lambda_rf() const { return phys::c_light / f_rf; }

  void validate() const {
    if (f_rf <= 0.0) throw ValidationError("carrier frequency must be positive");
  }
};

// Free-space power flux density at distance d, W/m^2.
double power_flux(const LinkBudget& link, double distance);

// Field magnitude of that flux, V/m.
double incident_field(double flux);

double received_power(double flux, double a_eff);

// Gain-weighted effective area of a reference dipole antenna.
double conventional_aperture(double f_rf, double g_rx_linear);

// Atom-mediated equivalent aperture of the vapor cell.
double effective_aperture(const AtomicSystem& sys, double n_atoms, double omega_rf_angular,
                          double gamma_fwhm);

// RF Rabi frequency produced by a field E, rad/s.
double rabi_from_field(const AtomicSystem& sys, double e_field);

// Atoms inside the probe beam volume.
double atom_number(const AtomicSystem& sys, double beam_diam, double length);

// LO-free magnitude observation: z = (dip/hbar)|sqrt(P_Rx) h x + n|, with n a
// field-referred complex Gaussian of variance sigma2 (W). `symbol` carries
// sqrt(P_Rx) * h * x in sqrt(W).
double observe_lo_free(const AtomicSystem& sys, std::complex<double> symbol, double sigma2,
                       CounterRng& rng);

// LO-dressed linear observation in sqrt(W) after the amplifier chain:
// z = sqrt(G R_L) D |kappa| (dip/hbar) * e_symbol + n, with e_symbol the
// received field times h x (V/m) and n output-referred of variance sigma2 (W).
std::complex<double> observe_lo_dressed(const AtomicSystem& sys, const FrontEnd& front,
                                        double kappa, std::complex<double> e_symbol,
                                        double sigma2, CounterRng& rng);

// Reference heterodyne receiver: SNR = G_LNA P_Rx |h|^2 / sigma2_conv
// (variant `symmetric` squares the gain in the numerator as well).
double snr_conventional(double p_rx, double h_mag2, const FrontEnd& front, double sigma2_conv,
                        ConvSnrVariant variant = ConvSnrVariant::paper);

} // namespace rydlink
