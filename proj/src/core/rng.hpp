#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace dsi {

// Counter-style splitmix64 stream. Work units draw from disjoint streams
// derived from (seed, stream), so parallel evaluation reproduces the
// sequential results exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in (0, 1).
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_exponential() { return -std::log(next_unit()); }

  // Standard normal via one Box-Muller pair; the sine branch is discarded.
  double next_gaussian() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Circularly symmetric complex normal with unit total variance
  // (variance 1/2 per real dimension), one Box-Muller pair per sample.
  std::complex<double> next_complex_gaussian() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u) / sqrt(2)
    return {r * std::cos(6.283185307179586 * u2),
            r * std::sin(6.283185307179586 * u2)};
  }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~0ULL - (~0ULL % bound);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace dsi
