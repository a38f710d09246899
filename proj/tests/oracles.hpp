#pragma once

// Reference implementations used only by the test suite. Everything here is
// built from textbook methods (trapezoid, Simpson, plain Monte Carlo with the
// standard library RNG) and deliberately avoids the library code it checks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// Trapezoid rule with n >= 2 equally spaced points including both endpoints.
template <class F>
double trapezoid(F f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n - 1);
  double acc = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += f(a + h * static_cast<double>(i));
  return acc * h;
}

// Composite Simpson rule; n must be odd (an even number of intervals).
template <class F>
double simpson(F f, double a, double b, std::size_t n) {
  const std::size_t m = (n % 2 == 0) ? n + 1 : n;
  const double h = (b - a) / static_cast<double>(m - 1);
  double acc = f(a) + f(b);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    double w = (i % 2 == 1) ? 4.0 : 2.0;
    acc += w * f(a + h * static_cast<double>(i));
  }
  return acc * h / 3.0;
}

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

// Scaled exponential integral e^x E1(x) = int_0^inf e^{-t}/(x+t) dt for x > 0.
// Split Simpson handles the steep region near t = 0 at small x.
inline double exp1_scaled(double x) {
  auto g = [x](double t) { return std::exp(-t) / (x + t); };
  return simpson(g, 0.0, 2.0, 100001) + simpson(g, 2.0, 60.0, 100001);
}

inline double exp1(double x) { return std::exp(-x) * exp1_scaled(x); }

// log I0 with an asymptotic branch where cyl_bessel_i would overflow.
inline double ln_bessel_i0(double x) {
  x = std::fabs(x);
  if (x < 600.0) return std::log(std::cyl_bessel_i(0.0, x));
  double inv = 1.0 / (8.0 * x);
  double series = 1.0 + inv + 4.5 * inv * inv + 37.5 * inv * inv * inv;
  return x - 0.5 * std::log(2.0 * kPi * x) + std::log(series);
}

inline double rician_logpdf(double z, double nu, double sigma) {
  if (z <= 0.0) return -1e300;
  double s2 = sigma * sigma;
  return std::log(z / s2) - (z * z + nu * nu) / (2.0 * s2) + ln_bessel_i0(z * nu / s2);
}

inline double rayleigh_logpdf(double z, double s) {
  if (z <= 0.0) return -1e300;
  return std::log(z / (s * s)) - z * z / (2.0 * s * s);
}

// Mean of a Rician(nu, sigma) variable by direct integration of z*pdf.
inline double rician_mean(double nu, double sigma) {
  double hi = nu + 12.0 * sigma;
  auto f = [&](double z) { return z * std::exp(rician_logpdf(z, nu, sigma)); };
  return simpson(f, 0.0, hi, 40001);
}

// ---------------------------------------------------------------------------
// Lorentzian family: L(a; b) = b^2 / (b^2 + a^2) and finite differences
// ---------------------------------------------------------------------------

inline double lorentzian(double a, double b) { return b * b / (b * b + a * a); }

inline double lorentzian_d1(double a, double b) {
  double den = b * b + a * a;
  return -2.0 * b * b * a / (den * den);
}

template <class F>
double diff1(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <class F>
double diff2(F f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

template <class F>
double diff3(F f, double x, double h) {
  return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
}

// ---------------------------------------------------------------------------
// Fisher information of a symmetric Lorentzian-doublet transmission dip
// ---------------------------------------------------------------------------
//
// Model: T(d; w) = 1 - C * [L(d - w/2; b) + L(d + w/2; b)], b = gamma_fwhm/2,
// photon counts Poisson with mean n_ph * T. The information about the
// splitting w carried by a scan over d is
//   I(w) = n_ph * int (dT/dw)^2 / T dd.
inline double fisher_doublet_numeric(double omega, double gamma_fwhm, double contrast,
                                     double n_ph) {
  const double b = 0.5 * gamma_fwhm;
  auto t_of = [&](double d) {
    return 1.0 - contrast * (lorentzian(d - 0.5 * omega, b) + lorentzian(d + 0.5 * omega, b));
  };
  auto dt_dw = [&](double d) {
    return 0.5 * contrast * (lorentzian_d1(d - 0.5 * omega, b) - lorentzian_d1(d + 0.5 * omega, b));
  };
  auto integrand = [&](double d) {
    double g = dt_dw(d);
    return g * g / t_of(d);
  };
  const double span = 20.0 * gamma_fwhm;
  return n_ph * trapezoid(integrand, -span, span, 20001);
}

// Weak-contrast closed form of the same integral (denominator T -> 1):
// I = (pi n_ph C^2 / (4 gamma_fwhm)) * S(r) with r = omega/gamma_fwhm and
// S(r) = 1 - (1 - 3 r^2) / (1 + r^2)^3, from the autocorrelation of L'.
inline double fisher_doublet_shape(double r) {
  double r2 = r * r;
  double den = (1.0 + r2) * (1.0 + r2) * (1.0 + r2);
  return 1.0 - (1.0 - 3.0 * r2) / den;
}

inline double fisher_doublet_weak(double omega, double gamma_fwhm, double contrast,
                                  double n_ph) {
  return kPi * n_ph * contrast * contrast / (4.0 * gamma_fwhm) *
         fisher_doublet_shape(omega / gamma_fwhm);
}

// ---------------------------------------------------------------------------
// Effective aperture from the single-atom power-balance chain
// ---------------------------------------------------------------------------
//
// Absorbed-photon rate per atom R = Omega^2 / gamma_fwhm with Omega = |dip| E / hbar;
// power per atom = hbar * omega_rf * R; total power = n_atoms * that; incident
// flux = E^2 / (2 Z0). The aperture is their ratio and must not depend on E.
inline double aperture_power_balance(double dip, double n_atoms, double f_rf,
                                     double gamma_fwhm, double e_field, double hbar,
                                     double z0) {
  double omega_rabi = std::fabs(dip) * e_field / hbar;
  double rate = omega_rabi * omega_rabi / gamma_fwhm;
  double p_total = n_atoms * hbar * (2.0 * kPi * f_rf) * rate;
  double flux = e_field * e_field / (2.0 * z0);
  return p_total / flux;
}

// ---------------------------------------------------------------------------
// Nested-fraction ladder coherence and its RF-drive derivative
// ---------------------------------------------------------------------------

struct LadderParams {
  double g21, g31, g41;           // pair decay rates, rad/s
  double omega_p, omega_c;        // Rabi, rad/s
  double delta_p, delta_c, delta_rf;
};

inline std::complex<double> ladder_rho21(const LadderParams& p, double omega_rf) {
  const std::complex<double> j{0.0, 1.0};
  std::complex<double> d3 = p.g41 - j * (p.delta_p + p.delta_c + p.delta_rf);
  std::complex<double> d2 = p.g31 - j * (p.delta_p + p.delta_c) + 0.25 * omega_rf * omega_rf / d3;
  std::complex<double> d1 = p.g21 - j * p.delta_p + 0.25 * p.omega_c * p.omega_c / d2;
  return -j * (0.5 * p.omega_p) / d1;
}

// Analytic d rho21 / d omega_rf by the chain rule through the nesting.
inline std::complex<double> ladder_drho21_domega(const LadderParams& p, double omega_rf) {
  const std::complex<double> j{0.0, 1.0};
  std::complex<double> d3 = p.g41 - j * (p.delta_p + p.delta_c + p.delta_rf);
  std::complex<double> d2 = p.g31 - j * (p.delta_p + p.delta_c) + 0.25 * omega_rf * omega_rf / d3;
  std::complex<double> d1 = p.g21 - j * p.delta_p + 0.25 * p.omega_c * p.omega_c / d2;
  std::complex<double> dd2 = 0.5 * omega_rf / d3;
  std::complex<double> dd1 = -0.25 * p.omega_c * p.omega_c / (d2 * d2) * dd2;
  return j * (0.5 * p.omega_p) / (d1 * d1) * dd1;
}

// ---------------------------------------------------------------------------
// Gaussian velocity average by trapezoid over +/- 6 sigma
// ---------------------------------------------------------------------------

template <class F>
std::complex<double> doppler_trapezoid(F rho_of_v, double sigma_v, std::size_t n) {
  const double span = 6.0 * sigma_v;
  const double h = 2.0 * span / static_cast<double>(n - 1);
  const double norm = 1.0 / (sigma_v * std::sqrt(2.0 * kPi));
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = -span + h * static_cast<double>(i);
    double w = norm * std::exp(-0.5 * v * v / (sigma_v * sigma_v));
    if (i == 0 || i + 1 == n) w *= 0.5;
    acc += w * rho_of_v(v);
  }
  return acc * h;
}

// ---------------------------------------------------------------------------
// Mutual information of the magnitude channel z = |x + n| by density ratio
// ---------------------------------------------------------------------------
//
// x ~ CN(0, snr), n ~ CN(0, 1). Conditional law Rician(|x|, sqrt(1/2)),
// marginal Rayleigh(sqrt((snr+1)/2)). Returns (estimate, standard error) in nats.
inline std::pair<double, double> mi_magnitude_mc(double snr, std::size_t n_samples,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double sx = std::sqrt(0.5 * snr);
  const double sn = std::sqrt(0.5);
  const double s_marg = std::sqrt(0.5 * (snr + 1.0));
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    double xr = sx * nd(rng), xi = sx * nd(rng);
    double wr = sn * nd(rng), wi = sn * nd(rng);
    double zr = xr + wr, zi = xi + wi;
    double z = std::hypot(zr, zi);
    double nu = std::hypot(xr, xi);
    double val = rician_logpdf(z, nu, sn) - rayleigh_logpdf(z, s_marg);
    sum += val;
    sum2 += val * val;
  }
  double mean = sum / static_cast<double>(n_samples);
  double var = sum2 / static_cast<double>(n_samples) - mean * mean;
  double se = std::sqrt(std::max(0.0, var) / static_cast<double>(n_samples));
  return {mean, se};
}

// ---------------------------------------------------------------------------
// Small statistics helpers
// ---------------------------------------------------------------------------

inline double binomial_se(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

} // namespace oracle
