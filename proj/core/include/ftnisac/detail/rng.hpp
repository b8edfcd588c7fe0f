#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace ftnisac::detail {

// Self-contained seeded generator (splitmix64 seeding + xoshiro256**).
// The standard-library distributions are implementation-defined, so all
// randomness goes through this class to keep outputs byte-identical for a
// given seed across toolchains. Independent per-trial streams are derived by
// counter splitting: stream(seed, i) and stream(seed, j) never share state.

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& w : s_) w = sm.next();
  }

  /// Derives an independent stream for (seed, stream_id), e.g. one per
  /// Monte Carlo trial, so that trial order and thread count do not matter.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    SplitMix64 sm{seed};
    const std::uint64_t a = sm.next();
    const std::uint64_t b = sm.next();
    Rng r(a ^ (stream_id * 0xD2B74407B1CE6E93ull) ^ (b + stream_id));
    return r;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), unbiased (Lemire multiply-shift with
  /// rejection).
  std::uint64_t uniform_below(std::uint64_t n) {
    using u128 = unsigned __int128;
    std::uint64_t x = next_u64();
    u128 m = static_cast<u128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<u128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller (second value cached).
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // uniform in (0, 1] so the log is finite
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

  /// Circularly symmetric complex normal with E|z|^2 = variance.
  std::complex<double> circular_gaussian(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace ftnisac::detail
