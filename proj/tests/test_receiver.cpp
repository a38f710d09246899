#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "rydlink/receiver.hpp"

using namespace rydlink;

TEST_CASE("link budget and flux") {
  LinkBudget link;

  SUBCASE("flux follows the inverse square law") {
    double s1 = power_flux(link, 100.0);
    double s2 = power_flux(link, 200.0);
    CHECK(s2 == doctest::Approx(s1 / 4.0).epsilon(1e-14));
  }

  SUBCASE("integrating the flux over the sphere returns the radiated power") {
    double s = power_flux(link, 100.0);
    CHECK(s * 4.0 * phys::pi * 1e4 ==
          doctest::Approx(link.p_tx_w() * link.g_tx()).epsilon(1e-14));
    CHECK(s == doctest::Approx(1.305539859954e-5).epsilon(1e-10));
  }

  SUBCASE("field amplitude squares back to the flux") {
    double s = power_flux(link, 100.0);
    double e = incident_field(s);
    CHECK(e * e / (2.0 * phys::z0_free_space) == doctest::Approx(s).epsilon(1e-14));
    CHECK(e == doctest::Approx(9.921577769715e-2).epsilon(1e-10));
  }

  SUBCASE("received power is flux times aperture") {
    CHECK(received_power(3.0e-5, 2.0e-4) == doctest::Approx(6.0e-9).epsilon(1e-14));
    CHECK(received_power(0.0, 2.0e-4) == 0.0);
  }

  SUBCASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(power_flux(link, 0.0), ValidationError);
    CHECK_THROWS_AS(power_flux(link, -5.0), ValidationError);
    CHECK_THROWS_AS(incident_field(-1.0), ValidationError);
  }
}

TEST_CASE("apertures") {
  AtomicSystem sys;
  LinkBudget link;

  SUBCASE("reference dipole aperture") {
    double lam = phys::c_light / link.f_rf;
    double a = conventional_aperture(link.f_rf, link.g_rx());
    CHECK(a == doctest::Approx(lam * lam * link.g_rx() / (4.0 * phys::pi)).epsilon(1e-14));
    CHECK(a == doctest::Approx(2.464525751272e-4).epsilon(1e-10));
  }

  SUBCASE("atomic aperture pins the measured chain") {
    double n_at = atom_number(sys, phys::probe_beam_diam, 0.01);
    CHECK(n_at == doctest::Approx(4.990105770962e7).epsilon(1e-10));
    double gamma_fwhm = phys::two_pi * 2.976437723632e6;
    double a = effective_aperture(sys, n_at, phys::two_pi * 6.9e9, gamma_fwhm);
    CHECK(a == doctest::Approx(1.192924023582e-4).epsilon(1e-10));
  }

  SUBCASE("atomic aperture scales linearly with atom count and inversely with width") {
    double gamma_fwhm = phys::two_pi * 2.976437723632e6;
    double a1 = effective_aperture(sys, 1e7, phys::two_pi * 6.9e9, gamma_fwhm);
    CHECK(effective_aperture(sys, 2e7, phys::two_pi * 6.9e9, gamma_fwhm) ==
          doctest::Approx(2.0 * a1).epsilon(1e-14));
    CHECK(effective_aperture(sys, 1e7, phys::two_pi * 6.9e9, 2.0 * gamma_fwhm) ==
          doctest::Approx(0.5 * a1).epsilon(1e-14));
    CHECK(effective_aperture(sys, 1e7, 2.0 * phys::two_pi * 6.9e9, gamma_fwhm) ==
          doctest::Approx(2.0 * a1).epsilon(1e-14));
  }

  SUBCASE("field to rabi conversion round trips") {
    double e = phys::hbar * phys::two_pi * 6e6 / std::fabs(sys.dip_rf);
    CHECK(e == doctest::Approx(3.310392585193e-1).epsilon(1e-10));
    CHECK(rabi_from_field(sys, e) == doctest::Approx(phys::two_pi * 6e6).epsilon(1e-12));
    CHECK(rabi_from_field(sys, 0.0) == 0.0);
  }
}

TEST_CASE("magnitude observation statistics") {
  AtomicSystem sys;
  const double scale = std::fabs(sys.dip_rf) / phys::hbar;
  const double sq = 2.0e-6; // per-quadrature noise, sqrt(W)
  const double sigma2 = 2.0 * sq * sq;
  const int n = 100000;

  SUBCASE("noise-free observation is the scaled magnitude") {
    CounterRng rng(1, 0);
    std::complex<double> s{3.0e-6, -4.0e-6};
    CHECK(observe_lo_free(sys, s, 0.0, rng) == doctest::Approx(scale * 5.0e-6).epsilon(1e-12));
    CHECK(rng.counter() == 0); // no draws consumed
  }

  SUBCASE("with signal the mean matches the rician prediction") {
    CounterRng rng(11, 2);
    double nu = 2.0 * sq;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double z = observe_lo_free(sys, {nu, 0.0}, sigma2, rng);
      sum += z;
      sum2 += z * z;
    }
    double mean = sum / n;
    double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::fabs(mean - scale * oracle::rician_mean(nu, sq)) < 4.0 * se);
  }

  SUBCASE("without signal the mean matches the rayleigh prediction") {
    CounterRng rng(11, 3);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double z = observe_lo_free(sys, {0.0, 0.0}, sigma2, rng);
      sum += z;
      sum2 += z * z;
    }
    double mean = sum / n;
    double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::fabs(mean - scale * sq * std::sqrt(phys::pi / 2.0)) < 4.0 * se);
  }

  SUBCASE("negative variance is rejected") {
    CounterRng rng(1, 0);
    CHECK_THROWS_AS(observe_lo_free(sys, {1.0, 0.0}, -1.0, rng), ValidationError);
  }
}

TEST_CASE("linear observation statistics") {
  AtomicSystem sys;
  FrontEnd fe;
  const double kap = 3.7e-13;
  const std::complex<double> es{1.3e-4, -0.7e-4};
  const double gain = std::sqrt(fe.g_lna() * fe.r_load) * fe.responsivity * kap *
                      std::fabs(sys.dip_rf) / phys::hbar;

  SUBCASE("noise-free output is linear in the field symbol") {
    CounterRng rng(1, 1);
    std::complex<double> z = observe_lo_dressed(sys, fe, kap, es, 0.0, rng);
    CHECK(std::abs(z - gain * es) < 1e-15 * std::abs(z));
    std::complex<double> z2 = observe_lo_dressed(sys, fe, kap, 2.0 * es, 0.0, rng);
    CHECK(std::abs(z2 - 2.0 * z) < 1e-15 * std::abs(z2));
  }

  SUBCASE("noise splits evenly across quadratures") {
    CounterRng rng(5, 9);
    const double s2 = 4.0e-9;
    const int n = 100000;
    std::complex<double> msum = 0.0;
    double vr = 0.0, vi = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> z = observe_lo_dressed(sys, fe, kap, es, s2, rng);
      msum += z;
      std::complex<double> dz = z - gain * es;
      vr += dz.real() * dz.real();
      vi += dz.imag() * dz.imag();
    }
    CHECK(vr / n == doctest::Approx(0.5 * s2).epsilon(0.03));
    CHECK(vi / n == doctest::Approx(0.5 * s2).epsilon(0.03));
    double mean_se = std::sqrt(0.5 * s2 / n);
    CHECK(std::abs(msum / static_cast<double>(n) - gain * es) < 4.0 * mean_se);
  }
}

TEST_CASE("reference receiver snr") {
  FrontEnd fe;
  CHECK(snr_conventional(2.5e-9, 0.64, fe, 1.7e-15) ==
        doctest::Approx(fe.g_lna() * 2.5e-9 * 0.64 / 1.7e-15).epsilon(1e-14));
  CHECK(snr_conventional(2.5e-9, 0.64, fe, 1.7e-15, ConvSnrVariant::symmetric) ==
        doctest::Approx(fe.g_lna() * snr_conventional(2.5e-9, 0.64, fe, 1.7e-15)).epsilon(1e-12));
  CHECK(snr_conventional(0.0, 0.64, fe, 1.7e-15) == 0.0);
  CHECK_THROWS_AS(snr_conventional(1e-9, 1.0, fe, 0.0), ValidationError);
}

TEST_CASE("counter rng reproducibility") {
  SUBCASE("same seed and stream replay the same sequence") {
    CounterRng a(7, 3), b(7, 3);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
  }

  SUBCASE("streams are independent") {
    CounterRng a(7, 3), b(7, 4);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
    CHECK(same == 0);
  }

  SUBCASE("uniform draws stay inside the open interval") {
    CounterRng r(123, 0);
    for (int i = 0; i < 1000; ++i) {
      double u = r.uniform();
      CHECK(u > 0.0);
      CHECK(u < 1.0);
    }
  }
}

TEST_CASE("front end validation") {
  FrontEnd fe;
  fe.eta_eff = 1.5;
  CHECK_THROWS_AS(fe.validate(), ValidationError);
  fe.eta_eff = 0.5;
  fe.noise_figure = 0.5;
  CHECK_THROWS_AS(fe.validate(), ValidationError);
  fe.noise_figure = 2.0;
  fe.r_load = -1.0;
  CHECK_THROWS_AS(fe.validate(), ValidationError);
}
