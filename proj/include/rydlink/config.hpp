#pragma once

#include "rydlink/performance.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace rydlink {

enum class KappaMode { fixed, adaptive };

// One run's worth of settings: typed physics blocks in SI units plus the
// experiment grids, parsed from sectioned key=value text with defaults for
// every field. The canonical dump (and hence the config hash) covers the
// full effective key set, so an empty file and an explicit default file
// hash identically.
struct ExperimentConfig {
  AtomicSystem sys{};
  DriveFields drives{};
  LinkBudget link{};
  FrontEnd front{};
  NoiseEnvironment env{};

  double cell_length = phys::cell_length_default; // m
  double coupling_diam = phys::coupling_beam_diam; // m, accepted, geometry only
  double alpha = 0.0;
  bool alpha_auto = true; // true: density sets the optical depth

  double gamma_fwhm_hz = 0.0;
  bool gamma_fwhm_auto = true; // true: measure from the spectrum at the drive point

  double n_atoms = 0.0;
  bool n_atoms_auto = true; // true: beam-volume count

  double omega_lo_hz = 4.23e6;
  SolverKind solver = SolverKind::full;
  bool doppler = false;
  KappaMode kappa_mode = KappaMode::fixed;
  ConvSnrVariant conv_variant = ConvSnrVariant::paper;

  std::uint64_t seed = 1;
  unsigned workers = 0; // 0 = hardware concurrency

  double delta_c_span_hz = 1.5e7; // spectra sweep +/- span
  std::size_t delta_c_points = 201;
  double omega_rf_max_hz = 1.2e7;
  std::size_t omega_rf_points = 25;
  double d_min_m = 10.0;
  double d_max_m = 1e4;
  std::size_t d_points = 61;
  double epsilon = 0.01;
  std::size_t thd_points = 41;
  bool use_opt_lo = true; // ldr experiment: operate at Gamma/sqrt(3)
  double snr_min_db = -10.0;
  double snr_max_db = 40.0;
  std::size_t snr_points = 51;
  std::size_t n_symbols = 1000000;
};

// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64(const std::string& s);

// Defaults, overlaid with the file when `path` is nonempty, then with
// RYDLINK_<SECTION>_<KEY> environment variables. Throws IoError (missing /
// unreadable file), ParseError, UnknownKey, ValidationError.
ExperimentConfig load_config(const std::string& path);

// Full effective key set as sorted "section.key=value" lines.
std::string canonical_dump(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical dump.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Full-solver linewidth at the configured drive point, rad/s FWHM. With RF
// drive on this is the width of one Autler-Townes component measured at the
// split position; with no drive it is the transparency-peak width.
double measure_gamma_fwhm(const AtomicSystem& sys, const DriveFields& drives,
                          const ProbeGeometry& geom, bool doppler = false);

// Resolve auto fields (optical depth, atom count, linewidth) into a runnable
// scenario.
Scenario make_scenario(const ExperimentConfig& cfg);

} // namespace rydlink
