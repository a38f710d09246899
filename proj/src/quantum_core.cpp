#include "rydlink/quantum_core.hpp"

#include "rydlink/errors.hpp"
#include "rydlink/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rydlink {

namespace {
using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};
} // namespace

Matrix4c build_hamiltonian(const AtomicSystem& sys, const DriveFields& d) {
  (void)sys;
  d.validate();
  Matrix4c h = Matrix4c::Zero();
  const double hb = phys::hbar;
  h(0, 1) = 0.5 * hb * d.omega_p;
  h(1, 0) = 0.5 * hb * d.omega_p;
  h(1, 1) = 0.5 * hb * (-2.0 * d.delta_p);
  h(1, 2) = 0.5 * hb * d.omega_c;
  h(2, 1) = 0.5 * hb * d.omega_c;
  h(2, 2) = 0.5 * hb * (-2.0 * (d.delta_p + d.delta_c));
  h(2, 3) = 0.5 * hb * d.rf_drive;
  h(3, 2) = 0.5 * hb * std::conj(d.rf_drive);
  h(3, 3) = 0.5 * hb * (-2.0 * (d.delta_p + d.delta_c + d.delta_rf));
  return h;
}

namespace {

// Relaxation matrix with a switch for the (4,3) rate: the printed form uses
// (gamma4+gamma2)/2 there, the solver form mirrors (3,4).
Matrix4c relaxation(const AtomicSystem& s, const Matrix4c& rho, bool printed_quirk) {
  Matrix4c r = Matrix4c::Zero();
  r(0, 0) = s.gamma2 * rho(1, 1);
  r(1, 1) = s.gamma3 * rho(2, 2) - s.gamma2 * rho(1, 1);
  r(2, 2) = s.gamma4 * rho(3, 3) - s.gamma3 * rho(2, 2);
  r(3, 3) = -s.gamma4 * rho(3, 3);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      double rate = s.gamma_pair(i + 1, j + 1);
      if (printed_quirk && i == 3 && j == 2) rate = s.gamma_pair(4, 2);
      r(i, j) = -rate * rho(i, j);
    }
  }
  return r;
}

} // namespace

Matrix4c build_lindblad(const AtomicSystem& sys, const Matrix4c& rho) {
  sys.validate();
  return relaxation(sys, rho, true);
}

namespace {

Matrix4c generator_action(const AtomicSystem& sys, const Matrix4c& h, const Matrix4c& rho) {
  Matrix4c comm = h * rho - rho * h;
  return (-I / phys::hbar) * comm + relaxation(sys, rho, false);
}

} // namespace

SteadyState steady_state_full(const AtomicSystem& sys, const DriveFields& drives) {
  sys.validate();
  drives.validate();
  if (sys.gamma1 == 0.0 && sys.gamma2 == 0.0 && sys.gamma3 == 0.0 && sys.gamma4 == 0.0)
    throw SingularSystem("no relaxation: the stationary state is not unique");
  const Matrix4c h = build_hamiltonian(sys, drives);

  // Column k of L is the generator applied to the k-th basis matrix.
  Eigen::Matrix<cd, 16, 16> lmat;
  for (int k = 0; k < 16; ++k) {
    Matrix4c basis = Matrix4c::Zero();
    basis(k / 4, k % 4) = 1.0;
    Matrix4c out = generator_action(sys, h, basis);
    for (int m = 0; m < 16; ++m) lmat(m, k) = out(m / 4, m % 4);
  }

  // Trace constraint replaces the rho_11 equation.
  Eigen::Matrix<cd, 16, 1> rhs = Eigen::Matrix<cd, 16, 1>::Zero();
  for (int k = 0; k < 16; ++k) lmat(0, k) = (k % 5 == 0) ? 1.0 : 0.0;
  rhs(0) = 1.0;

  Eigen::PartialPivLU<Eigen::Matrix<cd, 16, 16>> lu(lmat);
  Eigen::Matrix<cd, 16, 1> x = lu.solve(rhs);
  if (!x.allFinite()) throw SingularSystem("steady-state solve produced non-finite entries");

  Matrix4c rho;
  for (int k = 0; k < 16; ++k) rho(k / 4, k % 4) = x(k);

  Matrix4c rdot = generator_action(sys, h, rho);
  double residual = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) residual = std::max(residual, std::abs(rdot(i, j)));

  double gmax = std::max({sys.gamma2, sys.gamma3, sys.gamma4, 1.0});
  if (residual > 1e-9 * gmax)
    throw SingularSystem("steady-state residual too large: " + std::to_string(residual));
  return {rho, residual};
}

std::complex<double> rho21_closed_form(const AtomicSystem& sys, const DriveFields& d) {
  sys.validate();
  d.validate();
  const double g21 = sys.gamma_pair(2, 1);
  const double g31 = sys.gamma_pair(3, 1);
  const double g41 = sys.gamma_pair(4, 1);
  const double om = d.omega_rf_mag();
  const double d3 = d.delta_p + d.delta_c;
  const double d4 = d3 + d.delta_rf;

  cd eit_term = 0.0;
  if (d.omega_c != 0.0) {
    cd mid = cd(g31, -d3);
    if (om != 0.0) {
      cd inner = cd(g41, -d4);
      if (std::abs(inner) == 0.0) {
        // Limit of an infinite inner fraction: the ladder term vanishes.
        mid = cd(1.0, 0.0) * std::numeric_limits<double>::infinity();
      } else {
        mid += (0.25 * om * om) / inner;
      }
    }
    if (std::isinf(std::real(mid))) {
      eit_term = 0.0;
    } else {
      if (std::abs(mid) == 0.0)
        throw DegenerateDenominator("closed-form rho21: middle denominator vanished");
      eit_term = (0.25 * d.omega_c * d.omega_c) / mid;
    }
  }
  cd den = cd(g21, -d.delta_p) + eit_term;
  if (std::abs(den) == 0.0)
    throw DegenerateDenominator("closed-form rho21: outer denominator vanished");
  return -I * (0.5 * d.omega_p) / den;
}

std::complex<double> rho21_resonant_lo(const AtomicSystem& sys, double omega_p,
                                       double omega_c, double omega_tot) {
  sys.validate();
  if (omega_p < 0.0 || omega_c < 0.0 || omega_tot < 0.0)
    throw ValidationError("Rabi magnitudes must be nonnegative");
  if (omega_p == 0.0 && omega_tot == 0.0)
    throw ZeroInput("resonant rho21: probe and total RF drives are both zero");
  const double g2 = sys.gamma2;
  const double w2 = omega_tot * omega_tot;
  const double num = g2 * omega_p * w2;
  const double den = g2 * g2 * w2 + 2.0 * omega_p * omega_p * (omega_c * omega_c + omega_p * omega_p + w2);
  if (den == 0.0) throw DegenerateDenominator("resonant rho21: denominator vanished");
  return I * num / den;
}

std::complex<double> rho21_of(SolverKind kind, const AtomicSystem& sys, const DriveFields& drives) {
  if (kind == SolverKind::closed_form) return rho21_closed_form(sys, drives);
  return steady_state_full(sys, drives).rho(1, 0);
}

DriveFields drives_at_velocity(const DriveFields& drives, double v) {
  DriveFields out = drives;
  out.delta_p = drives.delta_p - phys::two_pi / drives.lambda_p * v;
  out.delta_c = drives.delta_c + phys::two_pi / drives.lambda_c * v;
  return out;
}

double sigma_velocity(const AtomicSystem& sys) {
  return std::sqrt(phys::k_boltzmann * sys.temperature / sys.mass);
}

std::complex<double> doppler_average(const AtomicSystem& sys, const DriveFields& drives,
                                     SolverKind kind, const DopplerOptions& opts) {
  const double sv = sigma_velocity(sys);
  const double scale = std::sqrt(2.0) * sv;
  const double inv_sqrt_pi = 1.0 / std::sqrt(phys::pi);

  auto evaluate = [&](std::size_t n) {
    const auto& rule = sf::gauss_hermite(n);
    cd acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      DriveFields dv = drives_at_velocity(drives, scale * rule.nodes[i]);
      acc += rule.weights[i] * rho21_of(kind, sys, dv);
    }
    return acc * inv_sqrt_pi;
  };

  std::size_t n = std::max<std::size_t>(2, opts.initial_nodes);
  cd prev = evaluate(n);
  // accept only after two consecutive doublings agree: a single small step can
  // be a plateau of an under-sampled narrow feature, not convergence
  double prev_diff = std::numeric_limits<double>::infinity();
  while (true) {
    if (n * 2 > opts.max_nodes)
      throw QuadratureNotConverged("Doppler average did not converge by " + std::to_string(n) + " nodes");
    n *= 2;
    cd cur = evaluate(n);
    double diff = std::abs(cur - prev);
    double gate = opts.rel_tol * std::abs(cur) + 1e-300;
    if (diff <= gate && prev_diff <= gate) return cur;
    prev_diff = diff;
    prev = cur;
  }
}

} // namespace rydlink
