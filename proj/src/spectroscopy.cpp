#include "rydlink/spectroscopy.hpp"

#include "rydlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace rydlink {

namespace {

double three_level_amplitude(const AtomicSystem& sys, const DriveFields& d) {
  double g2 = sys.gamma2;
  return g2 * d.omega_p / (g2 * g2 + 2.0 * d.omega_p * d.omega_p);
}

double dressed_hwhm(const AtomicSystem& sys, const DriveFields& d) {
  double g2 = sys.gamma2;
  double num = 2.0 * (d.omega_c * d.omega_c + d.omega_p * d.omega_p);
  double den = 2.0 * d.omega_p * d.omega_p + g2 * g2;
  return d.omega_p * std::sqrt(num / den);
}

} // namespace

ProbeGeometry make_probe_geometry(const AtomicSystem& sys, const DriveFields& drives, double length) {
  sys.validate();
  drives.validate();
  if (length <= 0.0) throw ValidationError("cell length must be positive");
  ProbeGeometry g;
  g.length = length;
  g.k_p = phys::two_pi / drives.lambda_p;
  double field = phys::hbar * drives.omega_p / std::fabs(sys.dip_probe);
  g.p_in = phys::pi / (2.0 * phys::z0_free_space) * std::pow(0.5 * drives.beam_diam * field, 2);
  g.c0 = 2.0 * sys.density * sys.dip_probe * sys.dip_probe /
         (phys::eps0 * phys::hbar * drives.omega_p);
  return g;
}

ProbeGeometry geometry_with_depth(const AtomicSystem& sys, const DriveFields& drives,
                                  double alpha, double length) {
  if (alpha <= 0.0) throw ValidationError("attenuation exponent must be positive");
  ProbeGeometry g = make_probe_geometry(sys, drives, length);
  double abar = three_level_amplitude(sys, drives);
  if (abar <= 0.0) throw ValidationError("attenuation depth needs a dissipative probe transition");
  g.c0 = alpha / (g.k_p * g.length * abar);
  return g;
}

double probe_transmission(const ProbeGeometry& geom, double im_abs) {
  return geom.p_in * std::exp(-geom.k_p * geom.length * geom.c0 * im_abs);
}

Spectrum sweep_eit_spectrum(const AtomicSystem& sys, const DriveFields& drives,
                            const std::vector<double>& delta_c_grid, const ProbeGeometry& geom,
                            SolverKind kind, bool use_doppler, const DopplerOptions& dopts) {
  if (delta_c_grid.size() < 3) throw GridTooCoarse("spectrum sweep needs at least 3 points");
  Spectrum spec;
  spec.delta_c = delta_c_grid;
  spec.im_abs.reserve(delta_c_grid.size());
  spec.p_out.reserve(delta_c_grid.size());
  DriveFields d = drives;
  for (double dc : delta_c_grid) {
    d.delta_c = dc;
    std::complex<double> rho21 =
        use_doppler ? doppler_average(sys, d, kind, dopts) : rho21_of(kind, sys, d);
    double im = absorptive_im(rho21);
    spec.im_abs.push_back(im);
    spec.p_out.push_back(probe_transmission(geom, im));
  }
  return spec;
}

std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw GridTooCoarse("peak search needs >= 3 samples");
  auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  double lo = *lo_it, hi = *hi_it;
  double threshold = lo + 0.1 * (hi - lo);
  double h = x[1] - x[0];
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] >= threshold)) continue;
    double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
    double denom = ym - 2.0 * y0 + yp;
    double dx = 0.0;
    if (denom != 0.0) dx = 0.5 * (ym - yp) / denom;
    dx = std::clamp(dx, -0.5, 0.5);
    peaks.push_back({x[i] + dx * h, y0 - 0.25 * (ym - yp) * dx});
  }
  return peaks;
}

double measure_eit_fwhm(const Spectrum& spec) {
  const auto& x = spec.delta_c;
  const auto& y = spec.p_out;
  if (x.size() < 5) throw GridTooCoarse("linewidth needs >= 5 samples");
  std::size_t ipk = std::distance(y.begin(), std::max_element(y.begin(), y.end()));
  if (ipk == 0 || ipk + 1 == y.size()) throw GridTooCoarse("transparency peak sits on the grid edge");
  double lo = *std::min_element(y.begin(), y.end());
  double half = 0.5 * (y[ipk] + lo);

  std::size_t il = ipk;
  while (il > 0 && y[il] > half) --il;
  if (y[il] > half) throw GridTooCoarse("left half-level not bracketed");
  double xl = x[il] + (half - y[il]) / (y[il + 1] - y[il]) * (x[il + 1] - x[il]);

  std::size_t ir = ipk;
  while (ir + 1 < y.size() && y[ir] > half) ++ir;
  if (y[ir] > half) throw GridTooCoarse("right half-level not bracketed");
  double xr = x[ir - 1] + (half - y[ir - 1]) / (y[ir] - y[ir - 1]) * (x[ir] - x[ir - 1]);

  std::size_t above = 0;
  for (std::size_t i = il; i <= ir; ++i)
    if (y[i] > half) ++above;
  if (above < 5) throw GridTooCoarse("fewer than 5 samples across the transparency window");
  return xr - xl;
}

double measure_peak_fwhm(const Spectrum& spec, double x_center) {
  const auto& x = spec.delta_c;
  const auto& y = spec.p_out;
  if (x.size() < 5) throw GridTooCoarse("linewidth needs >= 5 samples");
  std::vector<Peak> peaks = find_peaks(x, y);
  if (peaks.empty()) throw GridTooCoarse("no local maximum found for linewidth measurement");
  const Peak* best = &peaks[0];
  for (const Peak& p : peaks)
    if (std::fabs(p.x - x_center) < std::fabs(best->x - x_center)) best = &p;

  std::size_t ipk = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::fabs(x[i] - best->x) < std::fabs(x[ipk] - best->x)) ipk = i;
  if (ipk == 0 || ipk + 1 == y.size()) throw GridTooCoarse("peak sits on the grid edge");
  double lo = *std::min_element(y.begin(), y.end());
  double half = 0.5 * (best->y + lo);

  std::size_t il = ipk;
  while (il > 0 && y[il] > half) --il;
  if (y[il] > half) throw GridTooCoarse("left half-level not bracketed");
  double xl = x[il] + (half - y[il]) / (y[il + 1] - y[il]) * (x[il + 1] - x[il]);

  std::size_t ir = ipk;
  while (ir + 1 < y.size() && y[ir] > half) ++ir;
  if (y[ir] > half) throw GridTooCoarse("right half-level not bracketed");
  double xr = x[ir - 1] + (half - y[ir - 1]) / (y[ir] - y[ir - 1]) * (x[ir] - x[ir - 1]);

  std::size_t above = 0;
  for (std::size_t i = il; i <= ir; ++i)
    if (y[i] > half) ++above;
  if (above < 5) throw GridTooCoarse("fewer than 5 samples across the peak");
  return xr - xl;
}

SplittingResult at_splitting_interval(const Spectrum& spec) {
  std::vector<Peak> peaks = find_peaks(spec.delta_c, spec.p_out);
  if (peaks.size() < 2) return {0.0, false};
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.y > b.y; });
  Peak p1 = peaks[0], p2 = peaks[1];
  if (p1.x > p2.x) std::swap(p1, p2);

  auto [lo_it, hi_it] = std::minmax_element(spec.p_out.begin(), spec.p_out.end());
  double range = *hi_it - *lo_it;

  double saddle = p1.y;
  for (std::size_t i = 0; i < spec.delta_c.size(); ++i) {
    if (spec.delta_c[i] > p1.x && spec.delta_c[i] < p2.x) saddle = std::min(saddle, spec.p_out[i]);
  }
  bool resolved = (p1.y - saddle >= 0.05 * range) && (p2.y - saddle >= 0.05 * range);
  return {resolved ? p2.x - p1.x : 0.0, resolved};
}

LinearizedReadout linearized_readout(const AtomicSystem& sys, const DriveFields& drives,
                                     const ProbeGeometry& geom, double omega_lo) {
  sys.validate();
  drives.validate();
  if (omega_lo < 0.0) throw ValidationError("LO Rabi must be nonnegative");
  LinearizedReadout r;
  r.a_bar = three_level_amplitude(sys, drives);
  r.gamma_hwhm = dressed_hwhm(sys, drives);
  r.alpha = geom.k_p * geom.length * geom.c0 * r.a_bar;
  r.omega_lo = omega_lo;
  r.omega_lo_opt = r.gamma_hwhm / std::sqrt(3.0);
  double lam = lorentzian(omega_lo, r.gamma_hwhm);
  r.p_bar0 = geom.p_in * std::exp(-r.alpha) * std::exp(r.alpha * lam);
  double g2 = r.gamma_hwhm * r.gamma_hwhm;
  double den = g2 + omega_lo * omega_lo;
  r.kappa_rho = -2.0 * g2 * omega_lo / (den * den);
  r.kappa = r.alpha * r.p_bar0 * r.kappa_rho;
  return r;
}

BeatWaveform probe_beat_signal(const AtomicSystem& sys, const DriveFields& drives,
                               const ProbeGeometry& geom, double omega_lo, double omega_rf,
                               double delta_phi, std::size_t n_samples, double periods) {
  if (omega_lo < 0.0 || omega_rf < 0.0) throw ValidationError("Rabi magnitudes must be nonnegative");
  if (n_samples < 8) throw ValidationError("beat waveform needs >= 8 samples");
  LinearizedReadout lin = linearized_readout(sys, drives, geom, omega_lo);
  BeatWaveform w;
  w.theta.resize(n_samples);
  w.p_exact.resize(n_samples);
  w.p_linearized.resize(n_samples);
  const double total = phys::two_pi * periods;
  for (std::size_t m = 0; m < n_samples; ++m) {
    double theta = total * static_cast<double>(m) / static_cast<double>(n_samples);
    double phase = theta + delta_phi;
    double w2 = omega_lo * omega_lo + omega_rf * omega_rf +
                2.0 * omega_lo * omega_rf * std::cos(phase);
    double wtot = std::sqrt(std::max(0.0, w2));
    double im = rho21_resonant_lo(sys, drives.omega_p, drives.omega_c, wtot).imag();
    w.theta[m] = theta;
    w.p_exact[m] = probe_transmission(geom, im);
    w.p_linearized[m] = lin.p_bar0 + lin.kappa * omega_rf * std::cos(phase);
  }
  return w;
}

Harmonics harmonic_spectrum(const std::vector<double>& samples, double periods) {
  if (samples.size() < 8) throw GridTooCoarse("harmonic projection needs >= 8 samples");
  double rounded = std::round(periods);
  if (rounded < 1.0 || std::fabs(periods - rounded) > 1e-6 * std::max(1.0, std::fabs(periods)))
    throw NonIntegerPeriods("harmonic projection requires an integer number of beat periods");
  const std::size_t n = samples.size();
  const double total = phys::two_pi * periods;
  Harmonics h{0.0, 0.0, 0.0, 0.0};
  std::complex<double> c1 = 0.0, c2 = 0.0, c3 = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    double phi = total * static_cast<double>(m) / static_cast<double>(n);
    std::complex<double> e1{std::cos(phi), -std::sin(phi)};
    h.dc += samples[m];
    c1 += samples[m] * e1;
    c2 += samples[m] * e1 * e1;
    c3 += samples[m] * e1 * e1 * e1;
  }
  double inv = 1.0 / static_cast<double>(n);
  h.dc *= inv;
  h.h1 = 2.0 * std::abs(c1) * inv;
  h.h2 = 2.0 * std::abs(c2) * inv;
  h.h3 = 2.0 * std::abs(c3) * inv;
  return h;
}

double kappa_effective(const AtomicSystem& sys, const DriveFields& drives,
                       const ProbeGeometry& geom, double omega_lo, double omega_rf,
                       std::size_t n_samples) {
  if (omega_rf <= 0.0) throw ZeroInput("kappa_effective needs omega_rf > 0");
  BeatWaveform w = probe_beat_signal(sys, drives, geom, omega_lo, omega_rf, 0.0, n_samples, 1.0);
  double acc = 0.0;
  const std::size_t n = w.p_exact.size();
  for (std::size_t m = 0; m < n; ++m) acc += w.p_exact[m] * std::cos(w.theta[m]);
  double h1_signed = 2.0 * acc / static_cast<double>(n);
  return h1_signed / omega_rf;
}

} // namespace rydlink
