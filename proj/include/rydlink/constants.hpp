#pragma once

// Physical constants (SI) and the cesium ladder defaults used across the
// library. Frequencies are angular (rad/s) everywhere inside the library;
// config files and CLI speak plain Hz and the conversion happens at that
// boundary.

namespace rydlink::phys {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double planck_h = 6.62607015e-34; // J s
inline constexpr double k_boltzmann = 1.380649e-23; // J/K
inline constexpr double c_light = 2.99792458e8;   // m/s
inline constexpr double eps0 = 8.854e-12;         // F/m
inline constexpr double z0_free_space = 377.0;    // ohm
inline constexpr double elementary_charge = 1.6e-19; // C
inline constexpr double bohr_radius = 5.2e-11;    // m

// Cs ladder 6S1/2 -> 6P3/2 -> 47D5/2 -> 48P3/2
inline constexpr double cs_mass = 2.207e-25; // kg

// Dipole moments. The RF (Rydberg-Rydberg) one is quoted negative in the
// literature; formulas use its magnitude.
inline constexpr double dipole_probe = 2.5 * elementary_charge * bohr_radius;        // 2.08e-29 C m
inline constexpr double dipole_rf = -1443.459 * elementary_charge * bohr_radius;     // -1.2010e-26 C m

// Decay rates, angular. gamma1 = 0 (ground state).
inline constexpr double gamma2 = two_pi * 5.2e6;   // 6P3/2
inline constexpr double gamma3 = two_pi * 3.9e3;   // 47D5/2
inline constexpr double gamma4 = two_pi * 1.7e3;   // 48P3/2

// Optical wavelengths and beam geometry.
inline constexpr double lambda_probe = 852e-9;     // m
inline constexpr double lambda_coupling = 510e-9;  // m
inline constexpr double probe_beam_diam = 0.76e-3; // m, 1/e^2
inline constexpr double coupling_beam_diam = 1.95e-3; // m

// Default drive strengths, angular.
inline constexpr double omega_p_default = two_pi * 8.0e6;
inline constexpr double omega_c_default = two_pi * 1.0e6;

// RF carrier.
inline constexpr double f_rf_default = 6.9e9; // Hz

// Published vapor density figure. The magnitude is not usable as-is (it
// would mean one atom per ~2e15 m^3); it is kept only as a reference
// constant. The working default below is chosen so the resonant probe
// attenuation exponent is ~4, the scale the readout formulas imply.
inline constexpr double printed_vapor_density_cm3 = 4.89e-10; // reference only
inline constexpr double default_vapor_density_cm3 = 1.1e10;   // working default

inline constexpr double cell_length_default = 1e-2; // m
inline constexpr double temperature_default = 290.0; // K
inline constexpr double bandwidth_default = 1.0e5;   // Hz

// Front-end electronics defaults.
inline constexpr double lna_gain_db_default = 20.0;
inline constexpr double load_resistance_default = 50.0; // ohm
inline constexpr double pd_responsivity_default = 0.55; // A/W
inline constexpr double quantum_efficiency_default = 0.5;
inline constexpr double lna_noise_figure_default = 2.0; // linear factor F
inline constexpr double t2_coherence_default = 10e-6;   // s

// Link defaults.
inline constexpr double p_tx_dbm_default = 30.0;
inline constexpr double antenna_gain_dbi_default = 2.15;

} // namespace rydlink::phys
