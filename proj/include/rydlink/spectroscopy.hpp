#pragma once

#include "rydlink/quantum_core.hpp"

#include <vector>

namespace rydlink {

// Optical path through the cell plus the input power and susceptibility
// prefactor that turn a coherence into transmitted power.
struct ProbeGeometry {
  double length; // m
  double k_p;    // rad/m
  double p_in;   // W
  double c0;     // susceptibility magnitude prefactor, dimensionless * rho21
};

ProbeGeometry make_probe_geometry(const AtomicSystem& sys, const DriveFields& drives,
                                  double length = phys::cell_length_default);

// Same geometry but with c0 rescaled so the resonant attenuation exponent
// k_p L c0 Abar equals the requested alpha (thin/thick cell scenarios).
ProbeGeometry geometry_with_depth(const AtomicSystem& sys, const DriveFields& drives,
                                  double alpha, double length = phys::cell_length_default);

// Absorptive imaginary part from a solver-convention coherence.
inline double absorptive_im(std::complex<double> rho21) { return -rho21.imag(); }

// Beer-Lambert readout of one coherence value.
double probe_transmission(const ProbeGeometry& geom, double im_abs);

// Normalized Lorentzian, b = HWHM.
inline double lorentzian(double a, double b) { return b * b / (b * b + a * a); }

struct Spectrum {
  std::vector<double> delta_c;  // rad/s
  std::vector<double> im_abs;   // absorptive Im(rho21)
  std::vector<double> p_out;    // W
};

Spectrum sweep_eit_spectrum(const AtomicSystem& sys, const DriveFields& drives,
                            const std::vector<double>& delta_c_grid, const ProbeGeometry& geom,
                            SolverKind kind, bool use_doppler = false,
                            const DopplerOptions& dopts = {});

struct Peak {
  double x;
  double y;
};

// Local maxima above min + 0.1 * range, refined by a three-point parabola
// (offset clipped to half a grid step).
std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y);

// FWHM of the dominant transparency peak at half prominence over the sweep
// minimum. Throws GridTooCoarse when fewer than five samples lie above the
// half level.
double measure_eit_fwhm(const Spectrum& spec);

// FWHM of the local transparency peak nearest x_center, at half prominence
// over the sweep minimum; picks out one component of a split doublet.
double measure_peak_fwhm(const Spectrum& spec, double x_center);

struct SplittingResult {
  double omega_rf; // rad/s, peak separation when resolved, 0 otherwise
  bool resolved;
};

// Two-dominant-peaks rule: the two tallest transparency peaks must each
// exceed the saddle between them by at least 5% of the full range.
SplittingResult at_splitting_interval(const Spectrum& spec);

// Small-signal description of the LO-dressed operating point.
struct LinearizedReadout {
  double p_bar0;       // W, carrier transmission
  double alpha;        // resonant attenuation exponent
  double a_bar;        // three-level EIT amplitude
  double gamma_hwhm;   // rad/s, Lorentzian HWHM of the dressed response
  double kappa_rho;    // s, d Lambda / d Omega_LO
  double kappa;        // W s, alpha * P0 * kappa_rho
  double omega_lo;     // rad/s
  double omega_lo_opt; // rad/s, Gamma / sqrt(3)
};

LinearizedReadout linearized_readout(const AtomicSystem& sys, const DriveFields& drives,
                                     const ProbeGeometry& geom, double omega_lo);

// Exact beat waveform on a uniform theta grid spanning `periods` beat cycles
// (endpoint excluded). theta = 2 pi df t + dphi enters only through cos.
struct BeatWaveform {
  std::vector<double> theta;
  std::vector<double> p_exact;      // W, full nonlinear transmission
  std::vector<double> p_linearized; // W, carrier + kappa term
};

BeatWaveform probe_beat_signal(const AtomicSystem& sys, const DriveFields& drives,
                               const ProbeGeometry& geom, double omega_lo, double omega_rf,
                               double delta_phi = 0.0, std::size_t n_samples = 2048,
                               double periods = 1.0);

struct Harmonics {
  double dc;
  double h1;
  double h2;
  double h3;
};

// Coherent projection of a sampled waveform against the first three
// harmonics. `periods` must be an integer count of beat cycles (1e-6
// tolerance), matching how the samples were laid out.
Harmonics harmonic_spectrum(const std::vector<double>& samples, double periods = 1.0);

// Large-signal readout slope: first harmonic of the exact beat divided by
// Omega_RF. Tends to the linearized kappa as Omega_RF -> 0; carries its sign.
double kappa_effective(const AtomicSystem& sys, const DriveFields& drives,
                       const ProbeGeometry& geom, double omega_lo, double omega_rf,
                       std::size_t n_samples = 2048);

} // namespace rydlink
