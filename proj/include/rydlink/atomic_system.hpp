#pragma once

#include "rydlink/constants.hpp"
#include "rydlink/errors.hpp"

#include <cmath>
#include <complex>

namespace rydlink {

// Static properties of the four-level ladder medium.
struct AtomicSystem {
  double gamma1 = 0.0;                 // rad/s, ground state
  double gamma2 = phys::gamma2;        // rad/s
  double gamma3 = phys::gamma3;        // rad/s
  double gamma4 = phys::gamma4;        // rad/s
  double dip_probe = phys::dipole_probe; // C m, lower optical transition
  double dip_rf = phys::dipole_rf;       // C m, Rydberg-Rydberg (signed)
  double density = phys::default_vapor_density_cm3 * 1e6; // m^-3
  double mass = phys::cs_mass;         // kg
  double temperature = phys::temperature_default; // K

  double gamma_of(int level) const {
    switch (level) {
      case 1: return gamma1;
      case 2: return gamma2;
      case 3: return gamma3;
      case 4: return gamma4;
      default: throw ValidationError("level index must be 1..4");
    }
  }

  // Coherence decay rate between levels i and j.
  double gamma_pair(int i, int j) const { return 0.5 * (gamma_of(i) + gamma_of(j)); }

  void validate() const {
    if (gamma1 < 0 || gamma2 < 0 || gamma3 < 0 || gamma4 < 0)
      throw ValidationError("decay rates must be nonnegative");
    if (dip_probe == 0.0 || dip_rf == 0.0) throw ValidationError("dipole moments must be nonzero");
    if (density <= 0.0) throw ValidationError("density must be positive");
    if (mass <= 0.0 || temperature <= 0.0) throw ValidationError("mass and temperature must be positive");
  }
};

// Instantaneous drive configuration. All frequencies angular (rad/s).
struct DriveFields {
  double omega_p = phys::omega_p_default; // probe Rabi
  double omega_c = phys::omega_c_default; // coupling Rabi
  std::complex<double> rf_drive = 0.0;    // RF Rabi, complex to carry beat phase
  double delta_p = 0.0;
  double delta_c = 0.0;
  double delta_rf = 0.0;
  double lambda_p = phys::lambda_probe;
  double lambda_c = phys::lambda_coupling;
  double beam_diam = phys::probe_beam_diam;

  double omega_rf_mag() const { return std::abs(rf_drive); }

  void validate() const {
    if (omega_p <= 0.0) throw ValidationError("probe Rabi must be positive");
    if (omega_c < 0.0) throw ValidationError("coupling Rabi must be nonnegative");
    if (lambda_p <= 0.0 || lambda_c <= 0.0) throw ValidationError("wavelengths must be positive");
    if (beam_diam <= 0.0) throw ValidationError("beam diameter must be positive");
  }
};

} // namespace rydlink
