#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace nsvi {

// Deterministic random stream. mt19937_64 is fully pinned by the standard and
// the distributions below are implemented here rather than taken from
// <random>, whose distribution outputs vary across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n), bias-free by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % n;
  }

 private:
  std::mt19937_64 gen_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Splits one seed into independent substreams (mdp draws, error draws, ...).
inline std::uint64_t substream_seed(std::uint64_t base, std::uint64_t tag) {
  return splitmix64(base + 0x9E3779B97F4A7C15ULL * (tag + 1));
}

}  // namespace nsvi
