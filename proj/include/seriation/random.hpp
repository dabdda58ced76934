#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace seriation {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, a, b), so entries can be produced in any order.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t a,
                               std::uint64_t b = 0) const {
    std::uint64_t h = mix64(seed_ ^ mix64(stream + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ (a + 0x8cb92ba72f3d8dd7ULL));
    return mix64(h ^ (b * 0xd6e8feb86659fd93ULL + 0x1ULL));
  }

  /// Uniform in [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t a, std::uint64_t b = 0) const {
    return static_cast<double>(bits(stream, a, b) >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1].
  double uniform_open_low(std::uint64_t stream, std::uint64_t a, std::uint64_t b = 0) const {
    return (static_cast<double>(bits(stream, a, b) >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller on two sub-streams.
  double normal(std::uint64_t stream, std::uint64_t a, std::uint64_t b = 0) const {
    const double u1 = uniform_open_low(stream, a, 2 * b);
    const double u2 = uniform(stream, a, 2 * b + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Stream tags; one per independent source of randomness.
namespace streams {
inline constexpr std::uint64_t permutation = 1;
inline constexpr std::uint64_t noise = 2;
inline constexpr std::uint64_t latent = 3;
inline constexpr std::uint64_t mask = 4;
inline constexpr std::uint64_t theta = 5;
inline constexpr std::uint64_t bootstrap = 6;
inline constexpr std::uint64_t adversary = 7;
}  // namespace streams

}  // namespace seriation
