#pragma once

#include "rydlink/atomic_system.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace rydlink {

using Matrix4c = Eigen::Matrix4cd;

struct SteadyState {
  Matrix4c rho;
  double residual; // max |d rho/dt| of the solved state, rad/s
};

enum class SolverKind { closed_form, full };

// Rotating-frame Hamiltonian of the four-level ladder. The RF element sits
// on (3,4) with its conjugate mirrored to keep H Hermitian.
Matrix4c build_hamiltonian(const AtomicSystem& sys, const DriveFields& drives);

// Elementwise relaxation matrix, exactly as published: diagonal feeds
// populations down the ladder, off-diagonal entries damp as
// -(gamma_i+gamma_j)/2 * rho_ij, except entry (4,3) which damps with
// (gamma_4+gamma_2)/2 in the printed form. This builder reproduces that
// quirk verbatim. The steady-state solver uses a symmetrized variant
// internally ((gamma_4+gamma_3)/2 on both mirror entries) so the generator
// preserves Hermiticity; the distinction is documented in the README.
Matrix4c build_lindblad(const AtomicSystem& sys, const Matrix4c& rho);

// Full 16-dimensional steady state: vectorize d rho/dt = -i/hbar [H,rho] + R(rho),
// replace the first row with the trace constraint, LU-solve, and verify the
// residual against the original generator.
SteadyState steady_state_full(const AtomicSystem& sys, const DriveFields& drives);

// Weak-probe nested closed form for the optical coherence rho21. Sign
// convention matches the solver: Im(rho21) <= 0 on an absorbing background.
std::complex<double> rho21_closed_form(const AtomicSystem& sys, const DriveFields& drives);

// Resonant strong-probe coherence with an RF drive of total magnitude
// omega_tot (all detunings zero, Rydberg decays neglected). Printed in the
// absorptive convention: the value is +i * (positive), and its imaginary
// part equals -Im(rho21) of the solver convention.
std::complex<double> rho21_resonant_lo(const AtomicSystem& sys, double omega_p,
                                       double omega_c, double omega_tot);

// rho21 by either backend, in the solver sign convention.
std::complex<double> rho21_of(SolverKind kind, const AtomicSystem& sys, const DriveFields& drives);

// Doppler machinery. Counter-propagating probe/coupling geometry:
// delta_p(v) = delta_p - (2 pi / lambda_p) v, delta_c(v) = delta_c + (2 pi / lambda_c) v.
DriveFields drives_at_velocity(const DriveFields& drives, double v);

double sigma_velocity(const AtomicSystem& sys); // sqrt(kB T / m)

struct DopplerOptions {
  std::size_t initial_nodes = 64;
  std::size_t max_nodes = 32768;
  double rel_tol = 1e-6;
};

// Maxwell-Boltzmann average of rho21 over the velocity class, Gauss-Hermite
// with adaptive node doubling; accepts once two consecutive doublings agree to
// rel_tol. Throws QuadratureNotConverged at the cap.
std::complex<double> doppler_average(const AtomicSystem& sys, const DriveFields& drives,
                                     SolverKind kind, const DopplerOptions& opts = {});

} // namespace rydlink
