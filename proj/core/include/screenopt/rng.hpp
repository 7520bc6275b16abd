#pragma once

#include <cmath>
#include <cstdint>

namespace screenopt {

// splitmix64 finalizer. Bijective on 64-bit words, good avalanche; used both
// as the stream generator and for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Derives an independent child seed from (seed, index). Used to key per-unit,
// per-rep and per-cell streams so results are independent of execution order
// and thread count.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b) noexcept {
  return derive_seed(derive_seed(seed, a), b);
}

// Deterministic splitmix64 stream. Cheap to construct, so each sampled unit
// owns its own stream; replaying a unit replays its draws exactly.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on [0,1), 53-bit resolution.
  double next_uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log argument.
  double next_uniform_open() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) noexcept { return next_uniform() < p; }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    if (n <= 1) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller (one value per pair of uniforms; the sine
  // half is discarded to keep the stream stateless beyond its counter).
  double next_normal() noexcept {
    const double u1 = next_uniform_open();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Gamma(shape, 1). Marsaglia-Tsang squeeze for shape >= 1, boosted by
  // U^(1/shape) below 1. shape must be positive.
  double next_gamma(double shape) noexcept {
    if (shape < 1.0) {
      const double u = next_uniform_open();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_uniform_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Symmetric Beta(t, t) as a ratio of gammas. For very small t one gamma can
  // underflow to zero, collapsing the draw onto the matching endpoint; that is
  // where the true distribution piles its mass anyway.
  double next_beta_symmetric(double t) noexcept {
    const double g1 = next_gamma(t);
    const double g2 = next_gamma(t);
    const double s = g1 + g2;
    if (s <= 0.0) return 0.5;
    return g1 / s;
  }

 private:
  std::uint64_t state_;
};

}  // namespace screenopt
