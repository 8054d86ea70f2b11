#pragma once

#include <cstdint>

namespace tauberlab {

// splitmix64 (Sebastiano Vigna, public domain). Fixed as the instance
// generator so that seeded games are bit-reproducible across
// implementations: the draw order is documented at each call site.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53 random bits.
  constexpr double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0,...,n-1} by modular reduction (documented contract;
  // the bias is irrelevant at desk-scale n).
  constexpr std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace tauberlab
