#include "rydlink/special_functions.hpp"

#include "rydlink/constants.hpp"
#include "rydlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace rydlink::sf {

namespace {
constexpr double kAsymptoticSwitch = 500.0;
constexpr double kEulerGamma = 0.57721566490153286060651209;
} // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double ln_bessel_i0(double x) {
  x = std::fabs(x);
  if (x < kAsymptoticSwitch) return std::log(std::cyl_bessel_i(0.0, x));
  // I0(x) ~ e^x/sqrt(2 pi x) * (1 + 1/(8x) + 9/(128x^2) + 75/(1024x^3))
  double inv = 1.0 / x;
  double corr = inv * (0.125 + inv * (9.0 / 128.0 + inv * (75.0 / 1024.0)));
  return x - 0.5 * std::log(phys::two_pi * x) + std::log1p(corr);
}

double bessel_i1_over_i0(double x) {
  if (x < 0.0) return -bessel_i1_over_i0(-x);
  if (x < kAsymptoticSwitch) {
    if (x < 1e-300) return 0.0;
    return std::cyl_bessel_i(1.0, x) / std::cyl_bessel_i(0.0, x);
  }
  double inv = 1.0 / x;
  return 1.0 - inv * (0.5 + inv * (0.125 + inv * 0.125));
}

namespace {

// Series for E1(x) on (0, 1]: -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
double exp1_series(double x) {
  double sum = 0.0;
  double term = 1.0; // x^k / k!
  for (int k = 1; k <= 40; ++k) {
    term *= x / k;
    double add = term / k;
    sum += (k % 2 == 1) ? add : -add;
    if (add < 1e-18 * std::fabs(sum)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

// Continued fraction for e^x E1(x) = 1 / (x + 1 - 1/(x + 3 - 4/(...)))
// evaluated by the modified Lentz algorithm. Accurate for x > 1.
double exp1_cf_scaled(double x) {
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

} // namespace

double exp1(double x) {
  if (!(x > 0.0)) throw ZeroInput("exp1 requires x > 0");
  if (x <= 1.0) return exp1_series(x);
  return exp1_cf_scaled(x) * std::exp(-x);
}

double exp1_scaled(double x) {
  if (!(x > 0.0)) throw ZeroInput("exp1_scaled requires x > 0");
  if (x <= 1.0) return std::exp(x) * exp1_series(x);
  return exp1_cf_scaled(x);
}

double rician_mean(double nu, double sigma) {
  if (!(sigma > 0.0)) throw ZeroInput("rician_mean requires sigma > 0");
  double t = nu * nu / (2.0 * sigma * sigma);
  double half = 0.5 * t;
  // sigma sqrt(pi/2) e^{-t/2} [(1+t) I0(t/2) + t I1(t/2)], in log form
  double scale = std::exp(-half + ln_bessel_i0(half));
  double bracket = (1.0 + t) + t * bessel_i1_over_i0(half);
  return sigma * std::sqrt(phys::pi / 2.0) * scale * bracket;
}

double rician_logpdf(double z, double nu, double sigma) {
  if (!(sigma > 0.0)) throw ZeroInput("rician_logpdf requires sigma > 0");
  if (!(z > 0.0)) return -1e300;
  double s2 = sigma * sigma;
  return std::log(z) - std::log(s2) - (z * z + nu * nu) / (2.0 * s2) +
         ln_bessel_i0(z * std::fabs(nu) / s2);
}

double rayleigh_logpdf(double z, double sigma) {
  if (!(sigma > 0.0)) throw ZeroInput("rayleigh_logpdf requires sigma > 0");
  if (!(z > 0.0)) return -1e300;
  double s2 = sigma * sigma;
  return std::log(z) - std::log(s2) - z * z / (2.0 * s2);
}

namespace {

// Orthonormal Hermite recurrence value pair at x, renormalized on the fly so
// large orders do not overflow: true values are hn*exp(log_scale) and
// hnm1*exp(log_scale).
// h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}
void hermite_pair(std::size_t n, double x, double& hn, double& hnm1, double& log_scale) {
  const double big = 1e140;
  const double log_big = std::log(big);
  double h0 = 0.7511255444649425; // pi^{-1/4}
  double h1 = std::sqrt(2.0) * x * h0;
  log_scale = 0.0;
  if (n == 0) {
    hn = h0;
    hnm1 = 0.0;
    return;
  }
  double prev = h0, cur = h1;
  for (std::size_t k = 1; k < n; ++k) {
    double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::fabs(cur) > big) {
      cur /= big;
      prev /= big;
      log_scale += log_big;
    }
  }
  hn = cur;
  hnm1 = prev;
}

// w_i = 1 / (n * H_{n-1}(x_i)^2) with H orthonormal; computed in log space so
// far-tail weights underflow cleanly to zero instead of tripping overflow.
double hermite_weight(std::size_t n, double hnm1, double log_scale) {
  double lw = -std::log(static_cast<double>(n)) - 2.0 * (std::log(std::fabs(hnm1)) + log_scale);
  return std::exp(lw);
}

GaussHermite compute_gauss_hermite(std::size_t n) {
  if (n < 2) throw ValidationError("gauss_hermite needs n >= 2");
  GaussHermite out;
  out.nodes.resize(n);
  out.weights.resize(n);
  std::size_t m = (n + 1) / 2;
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    // initial guess via the WKB phase: the (i+1)-th positive root, counted
    // from the outside in, sits at sqrt(2n+1)*cos(phi) where phi solves
    // phi - sin(phi)cos(phi) = 2*pi*(i + 3/4)/(2n+1). Accurate to ~1% of the
    // local root gap at every order, so Newton below cannot hop roots.
    const double two_n1 = 2.0 * n + 1.0;
    const double half_pi = 0.5 * phys::pi;
    double t = phys::pi * (2.0 * i + 1.5) / two_n1;
    double phi = std::min(std::cbrt(1.5 * t), half_pi);
    for (int it = 0; it < 60; ++it) {
      double s = std::sin(phi);
      double f = phi - s * std::cos(phi) - t;
      double df = 2.0 * s * s;
      if (df < 1e-18) break;
      double dphi = f / df;
      phi = std::clamp(phi - dphi, 0.0, half_pi);
      if (std::fabs(dphi) < 1e-14) break;
    }
    z = std::sqrt(two_n1) * std::cos(phi);
    double hn = 0.0, hnm1 = 0.0, ls = 0.0;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      hermite_pair(n, z, hn, hnm1, ls);
      double deriv = std::sqrt(2.0 * n) * hnm1;
      double step = hn / deriv;
      z -= step;
      if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw QuadratureNotConverged("gauss_hermite Newton iteration stalled");
    hermite_pair(n, z, hn, hnm1, ls);
    double w = hermite_weight(n, hnm1, ls);
    // store descending from the top; mirror later
    out.nodes[i] = z;
    out.weights[i] = w;
    if (i > 0 && z >= out.nodes[i - 1])
      throw QuadratureNotConverged("gauss_hermite Newton converged to a duplicate root");
  }
  GaussHermite full;
  full.nodes.resize(n);
  full.weights.resize(n);
  for (std::size_t i = 0; i < m; ++i) {
    full.nodes[n - 1 - i] = out.nodes[i];
    full.weights[n - 1 - i] = out.weights[i];
    full.nodes[i] = -out.nodes[i];
    full.weights[i] = out.weights[i];
  }
  if (n % 2 == 1) {
    full.nodes[n / 2] = 0.0;
    double hn = 0.0, hnm1 = 0.0, ls = 0.0;
    hermite_pair(n, 0.0, hn, hnm1, ls);
    full.weights[n / 2] = hermite_weight(n, hnm1, ls);
  }
  return full;
}

std::mutex gh_mutex;
std::map<std::size_t, GaussHermite> gh_cache;

} // namespace

const GaussHermite& gauss_hermite(std::size_t n) {
  std::scoped_lock lock(gh_mutex);
  auto it = gh_cache.find(n);
  if (it == gh_cache.end()) it = gh_cache.emplace(n, compute_gauss_hermite(n)).first;
  return it->second;
}

} // namespace rydlink::sf
