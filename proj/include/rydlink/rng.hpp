#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace rydlink {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so results are reproducible regardless of how
// work is split across threads. Each parallel work item gets its own
// stream id and a fresh counter.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix(mix(seed) ^ (0x9e3779b97f4a7c15ull * (stream + 1)))) {}

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return mix(base_ ^ (counter_++ * 0xd1342543de82ef95ull)); }

  // uniform in (0,1), 53-bit mantissa, never exactly 0 or 1
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly symmetric complex Gaussian with total variance var
  // (var/2 per quadrature).
  std::complex<double> complex_normal(double var) {
    double s = std::sqrt(var * 0.5);
    double re = normal();
    double im = normal();
    return {s * re, s * im};
  }

  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace rydlink
