#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rydlink/performance.hpp"
#include "rydlink/spectroscopy.hpp"

using namespace rydlink;

namespace {

std::vector<double> grid_pm(double half_hz, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = phys::two_pi * (-half_hz + 2.0 * half_hz * i / (n - 1));
  return g;
}

Spectrum synthetic_doublet(double sep, double hwhm, double half_span, int n) {
  Spectrum s;
  for (int i = 0; i < n; ++i) {
    double x = -half_span + 2.0 * half_span * i / (n - 1);
    s.delta_c.push_back(x);
    s.im_abs.push_back(0.0);
    s.p_out.push_back(lorentzian(x - 0.5 * sep, hwhm) + lorentzian(x + 0.5 * sep, hwhm));
  }
  return s;
}

} // namespace

TEST_CASE("probe geometry and transmission") {
  AtomicSystem sys;
  DriveFields d;
  ProbeGeometry geom = make_probe_geometry(sys, d);

  CHECK(geom.k_p == phys::two_pi / d.lambda_p);
  CHECK(geom.length == doctest::Approx(0.01));
  CHECK(geom.p_in == doctest::Approx(3.907609e-5).epsilon(1e-3));

  SUBCASE("zero absorption passes the input power through") {
    CHECK(probe_transmission(geom, 0.0) == geom.p_in);
  }

  SUBCASE("transmission falls monotonically with absorption") {
    double prev = probe_transmission(geom, 0.0);
    for (double im : {0.01, 0.05, 0.1, 0.2}) {
      double p = probe_transmission(geom, im);
      CHECK(p < prev);
      CHECK(p > 0.0);
      prev = p;
    }
  }

  SUBCASE("requested optical depth is honored exactly") {
    ProbeGeometry thin = geometry_with_depth(sys, d, 0.05);
    LinearizedReadout lin = linearized_readout(sys, d, thin, 0.0);
    CHECK(lin.alpha == doctest::Approx(0.05).epsilon(1e-12));
  }
}

TEST_CASE("lorentzian profile") {
  CHECK(lorentzian(0.0, 2.0) == 1.0);
  CHECK(lorentzian(2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lorentzian(6.0, 2.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(lorentzian(-3.0, 2.0) == lorentzian(3.0, 2.0));
}

TEST_CASE("linearized readout at the dressed operating point") {
  AtomicSystem sys;
  DriveFields d;
  ProbeGeometry thin = geometry_with_depth(sys, d, 0.05);

  SUBCASE("dark LO transmits the full input and has zero slope") {
    LinearizedReadout l0 = linearized_readout(sys, d, thin, 0.0);
    CHECK(std::fabs(l0.p_bar0 - thin.p_in) / thin.p_in < 1e-12);
    CHECK(l0.kappa_rho == 0.0);
  }

  SUBCASE("optimum bias sits at the inflection of the dressed Lorentzian") {
    LinearizedReadout l0 = linearized_readout(sys, d, thin, 0.0);
    LinearizedReadout lo = linearized_readout(sys, d, thin, l0.omega_lo_opt);
    CHECK(lo.omega_lo_opt == doctest::Approx(lo.gamma_hwhm / std::sqrt(3.0)).epsilon(1e-12));
    double kmax = 3.0 * std::sqrt(3.0) / (8.0 * lo.gamma_hwhm);
    CHECK(std::fabs(lo.kappa_rho) == doctest::Approx(kmax).epsilon(1e-9));

    // the slope magnitude is maximal there
    for (double f : {0.8, 0.9, 1.1, 1.2}) {
      LinearizedReadout l = linearized_readout(sys, d, thin, f * l0.omega_lo_opt);
      CHECK(std::fabs(l.kappa_rho) < std::fabs(lo.kappa_rho));
    }
  }
}

TEST_CASE("eit spectrum sweeps") {
  AtomicSystem sys;
  DriveFields d;
  ProbeGeometry geom = make_probe_geometry(sys, d);
  auto grid = grid_pm(15e6, 201);

  SUBCASE("no rf field gives a single transparency peak at line center") {
    Spectrum s = sweep_eit_spectrum(sys, d, grid, geom, SolverKind::full);
    auto peaks = find_peaks(s.delta_c, s.p_out);
    REQUIRE(peaks.size() == 1);
    CHECK(std::fabs(peaks[0].x) < 1e-6);
    double fwhm = measure_eit_fwhm(s);
    CHECK(fwhm > 1.5e7);
    CHECK(fwhm < 2.2e7);
  }

  SUBCASE("spectra are symmetric in the coupling detuning") {
    DriveFields drf = d;
    drf.rf_drive = phys::two_pi * 6e6;
    for (auto kind : {SolverKind::full, SolverKind::closed_form}) {
      Spectrum s = sweep_eit_spectrum(sys, drf, grid, geom, kind);
      double mx = 0.0;
      for (int i = 0; i < 201; ++i)
        mx = std::max(mx, std::fabs(s.im_abs[i] - s.im_abs[200 - i]));
      CHECK(mx < 1e-15);
    }
  }

  SUBCASE("a strong rf field splits the line by its rabi rate") {
    DriveFields drf = d;
    drf.rf_drive = phys::two_pi * 6e6;
    Spectrum s = sweep_eit_spectrum(sys, drf, grid, geom, SolverKind::full);
    auto peaks = find_peaks(s.delta_c, s.p_out);
    CHECK(peaks.size() == 2);
    SplittingResult sp = at_splitting_interval(s);
    REQUIRE(sp.resolved);
    double rel = sp.omega_rf / (phys::two_pi * 6e6) - 1.0;
    CHECK(rel == doctest::Approx(-5.381942e-4).epsilon(0.05));
    CHECK(std::fabs(rel) < 1e-3);
  }

  SUBCASE("splitting recovery improves as the doublet separates") {
    double gref = phys::two_pi * 2.976437723632e6;
    struct Row {
      double ratio;
      bool resolved;
      double rel_err;
    };
    const Row table[] = {
        {0.5, false, 0.0},
        {1.5, true, -5.020411e-3},
        {2.0, true, -5.435470e-4},
        {3.0, true, 8.003141e-4},
    };
    for (const Row& row : table) {
      DriveFields drf = d;
      drf.rf_drive = row.ratio * gref;
      Spectrum s = sweep_eit_spectrum(sys, drf, grid, geom, SolverKind::full);
      SplittingResult sp = at_splitting_interval(s);
      CHECK(sp.resolved == row.resolved);
      if (!row.resolved) {
        CHECK(sp.omega_rf == 0.0);
      } else {
        double rel = sp.omega_rf / (row.ratio * gref) - 1.0;
        CHECK(std::fabs(rel - row.rel_err) < 5e-5);
      }
    }
  }
}

TEST_CASE("peak analysis on synthetic spectra") {
  SUBCASE("parabolic refinement recovers an off-grid vertex exactly") {
    std::vector<double> x, y;
    for (int i = 0; i <= 10; ++i) {
      x.push_back(0.1 * i);
      y.push_back(1.0 - (0.1 * i - 0.33) * (0.1 * i - 0.33));
    }
    auto peaks = find_peaks(x, y);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].x == doctest::Approx(0.33).epsilon(1e-9));
  }

  SUBCASE("bumps below a tenth of the range are ignored") {
    std::vector<double> x, y;
    for (int i = 0; i <= 100; ++i) {
      double xx = -5.0 + 0.1 * i;
      x.push_back(xx);
      y.push_back(lorentzian(xx, 0.8) + 0.04 * lorentzian(xx - 4.0, 0.3));
    }
    CHECK(find_peaks(x, y).size() == 1);
  }

  SUBCASE("well separated doublet resolves with a small inward pull") {
    Spectrum s = synthetic_doublet(6.0, 1.0, 10.0, 801);
    SplittingResult sp = at_splitting_interval(s);
    REQUIRE(sp.resolved);
    CHECK(sp.omega_rf == doctest::Approx(5.991210).epsilon(1e-4));
    CHECK(measure_peak_fwhm(s, 3.0) == doctest::Approx(2.012427).epsilon(1e-3));
  }

  SUBCASE("overlapping doublet merges into one unresolved peak") {
    Spectrum s = synthetic_doublet(0.5, 1.0, 10.0, 801);
    CHECK(find_peaks(s.delta_c, s.p_out).size() == 1);
    SplittingResult sp = at_splitting_interval(s);
    CHECK_FALSE(sp.resolved);
    CHECK(sp.omega_rf == 0.0);
  }

  SUBCASE("width measurement needs enough samples above the half level") {
    Spectrum s = synthetic_doublet(0.0, 0.3, 5.0, 11);
    CHECK_THROWS_AS(measure_eit_fwhm(s), GridTooCoarse);
  }

  SUBCASE("isolated lorentzian width lands near twice its half width") {
    Spectrum s;
    double b = 1.3e6;
    for (int i = 0; i <= 400; ++i) {
      double x = -8e6 + 16e6 * i / 400.0;
      s.delta_c.push_back(x);
      s.im_abs.push_back(0.0);
      s.p_out.push_back(lorentzian(x, b));
    }
    CHECK(measure_eit_fwhm(s) == doctest::Approx(2.0 * b).epsilon(0.05));
  }
}

TEST_CASE("beat waveform and harmonics") {
  AtomicSystem sys;
  DriveFields d;
  ProbeGeometry thin = geometry_with_depth(sys, d, 0.05);
  LinearizedReadout l0 = linearized_readout(sys, d, thin, 0.0);
  const double wlo = l0.omega_lo_opt;
  LinearizedReadout lin = linearized_readout(sys, d, thin, wlo);

  SUBCASE("no rf field leaves the carrier transmission flat") {
    BeatWaveform w = probe_beat_signal(sys, d, thin, wlo, 0.0, 0.0, 64, 1.0);
    for (double p : w.p_exact) CHECK(p == doctest::Approx(lin.p_bar0).epsilon(1e-14));
  }

  SUBCASE("weak beat stays within the linearized model") {
    double wrf = 0.01 * wlo;
    BeatWaveform w = probe_beat_signal(sys, d, thin, wlo, wrf, 0.0, 2048, 1.0);
    double ss = 0.0;
    for (std::size_t m = 0; m < w.theta.size(); ++m) {
      double e = w.p_linearized[m] - w.p_exact[m];
      ss += e * e;
    }
    double rms = std::sqrt(ss / w.theta.size()) / lin.p_bar0;
    CHECK(rms == doctest::Approx(5.706098e-7).epsilon(0.02));
  }

  SUBCASE("harmonic ladder follows the drive ratio") {
    for (double u : {0.01, 0.05}) {
      double wrf = u * wlo;
      BeatWaveform w = probe_beat_signal(sys, d, thin, wlo, wrf, 0.0, 2048, 1.0);
      Harmonics h = harmonic_spectrum(w.p_exact, 1.0);
      CHECK(4.0 * h.h2 / h.h1 == doctest::Approx(u).epsilon(0.05));
    }
  }

  SUBCASE("third harmonic follows the cubic response term") {
    double wrf = 0.01 * wlo;
    BeatWaveform w = probe_beat_signal(sys, d, thin, wlo, wrf, 0.0, 2048, 1.0);
    Harmonics h = harmonic_spectrum(w.p_exact, 1.0);
    LambdaDerivs ld = lambda_derivs(wlo, lin.gamma_hwhm);
    double pred = wrf * wrf / 6.0 * std::fabs(ld.d3 / ld.d1);
    CHECK(4.0 * h.h3 / h.h1 == doctest::Approx(pred).epsilon(0.1));
  }

  SUBCASE("large-signal slope converges to the linearized kappa") {
    for (double u : {0.01, 0.05}) {
      double keff = kappa_effective(sys, d, thin, wlo, u * wlo, 2048);
      double rel = std::fabs(keff - lin.kappa) / std::fabs(lin.kappa);
      CHECK(rel < (u == 0.01 ? 1e-4 : 2e-3));
    }
  }

  SUBCASE("a pi phase flip shifts the waveform by half a period") {
    double wrf = 0.05 * wlo;
    BeatWaveform w0 = probe_beat_signal(sys, d, thin, wlo, wrf, 0.0, 2048, 1.0);
    BeatWaveform wf = probe_beat_signal(sys, d, thin, wlo, wrf, phys::pi, 2048, 1.0);
    double mx = 0.0, ss = 0.0;
    for (std::size_t m = 0; m < 2048; ++m) {
      mx = std::max(mx, std::fabs(wf.p_exact[m] - w0.p_exact[(m + 1024) % 2048]));
      double e = w0.p_exact[m] + wf.p_exact[m] - 2.0 * lin.p_bar0;
      ss += e * e;
    }
    CHECK(mx / lin.p_bar0 < 1e-12);
    // opposite phases cancel odd harmonics, leaving the quadratic residue
    CHECK(std::sqrt(ss / 2048.0) / lin.p_bar0 == doctest::Approx(2.852081e-5).epsilon(0.05));
  }

  SUBCASE("linearization error is bounded by the exponential remainder") {
    ProbeGeometry geom = make_probe_geometry(sys, d);
    LinearizedReadout ldef = linearized_readout(sys, d, geom, wlo);
    for (double u : {0.1, 0.5}) {
      double wrf = u * wlo;
      BeatWaveform w = probe_beat_signal(sys, d, geom, wlo, wrf, 0.0, 2048, 1.0);
      double ss = 0.0;
      for (std::size_t m = 0; m < w.theta.size(); ++m) {
        double e = w.p_linearized[m] - w.p_exact[m];
        ss += e * e;
      }
      double rms = std::sqrt(ss / w.theta.size()) / ldef.p_bar0;
      double r = ldef.alpha * std::fabs(ldef.kappa_rho) * wrf;
      CHECK(rms <= r * r * std::exp(r) / 2.0);
    }
  }

  SUBCASE("harmonic projection recovers synthetic amplitudes") {
    std::vector<double> samples(64);
    for (int m = 0; m < 64; ++m) {
      double phi = phys::two_pi * m / 64.0;
      samples[m] = 0.7 + 0.35 * std::cos(phi + 0.9) + 0.21 * std::cos(2.0 * phi) +
                   0.07 * std::cos(3.0 * phi);
    }
    Harmonics h = harmonic_spectrum(samples, 1.0);
    CHECK(h.dc == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(h.h1 == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(h.h2 == doctest::Approx(0.21).epsilon(1e-12));
    CHECK(h.h3 == doctest::Approx(0.07).epsilon(1e-12));
  }

  SUBCASE("harmonic projection rejects bad sampling") {
    std::vector<double> seven(7, 1.0);
    CHECK_THROWS_AS(harmonic_spectrum(seven, 1.0), GridTooCoarse);
    std::vector<double> ok(16, 1.0);
    CHECK_THROWS_AS(harmonic_spectrum(ok, 1.5), NonIntegerPeriods);
    CHECK_THROWS_AS(harmonic_spectrum(ok, 0.0), NonIntegerPeriods);
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(probe_beat_signal(sys, d, thin, -1.0, 1e6), ValidationError);
    CHECK_THROWS_AS(probe_beat_signal(sys, d, thin, wlo, 1e6, 0.0, 4, 1.0), ValidationError);
    CHECK_THROWS_AS(kappa_effective(sys, d, thin, wlo, 0.0), ZeroInput);
  }
}
