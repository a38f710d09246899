#pragma once

#include <cstddef>
#include <vector>

namespace rydlink::sf {

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

// log I0(x), stable for large argument (switches to the asymptotic
// expansion around x = 500 where exp(x) would overflow long before).
double ln_bessel_i0(double x);

// I1(x)/I0(x), same large-argument strategy.
double bessel_i1_over_i0(double x);

// Exponential integral E1(x) = int_x^inf exp(-t)/t dt, x > 0.
// Power series for x <= 1, continued fraction (modified Lentz) beyond.
double exp1(double x);

// exp(x) * E1(x), overflow-free for large x (the continued fraction gives
// this product directly).
double exp1_scaled(double x);

// Mean of a Rician variable with noncentrality nu and per-component
// sigma. Stable at large nu^2/sigma^2.
double rician_mean(double nu, double sigma);

// Log densities used by the mutual-information estimators.
double rician_logpdf(double z, double nu, double sigma);
double rayleigh_logpdf(double z, double sigma);

// Gauss-Hermite rule for weight exp(-x^2) on (-inf, inf).
// Nodes ascending; results cached per n (thread safe).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermite& gauss_hermite(std::size_t n);

} // namespace rydlink::sf
