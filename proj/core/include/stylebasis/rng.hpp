#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace stylebasis {

/// SplitMix64 generator. All randomness in the library is drawn from it so a
/// run is reproducible from a single 64-bit seed; sub-seeds are derived with
/// `derive`, never drawn independently.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Standard normal via Box-Muller (one draw per call, the pair's partner is discarded).
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Child seed for a named stream; stable across releases.
  static std::uint64_t derive(std::uint64_t seed, std::string_view stream) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
    for (unsigned char ch : stream) {
      h ^= ch;
      h *= 0x100000001B3ull;
    }
    Rng mixer(seed ^ h);
    return mixer.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace stylebasis
