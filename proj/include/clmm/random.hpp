#pragma once

// Seeded random streams. Every Monte-Carlo path owns a stream derived from
// (root seed, stream id, path index), so results do not depend on the order
// in which paths are run or on the number of workers.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace clmm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(splitmix64(root) ^ stream) ^ index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t root, std::uint64_t stream, std::uint64_t index)
      : engine_(derive_seed(root, stream, index)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal by Box-Muller; always consumes exactly two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Stream ids used across the library. Distinct ids keep unrelated
// consumers of the same root seed independent.
namespace streams {
inline constexpr std::uint64_t kSwaps = 1;
inline constexpr std::uint64_t kMarket = 2;
inline constexpr std::uint64_t kOpponents = 3;
inline constexpr std::uint64_t kPlayers = 4;
inline constexpr std::uint64_t kBot = 5;
inline constexpr std::uint64_t kSynthetic = 6;
inline constexpr std::uint64_t kPeriods = 7;
}  // namespace streams

}  // namespace clmm
