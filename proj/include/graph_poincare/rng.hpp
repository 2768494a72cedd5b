#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace graph_poincare {

// Deterministic draws on top of std::mt19937_64. std::uniform_real_distribution
// and friends are implementation-defined, so doubles are derived from the raw
// engine bits directly; the same seed yields the same sequence on every
// platform and compiler.

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * uniform01(rng);
}

/// Uniform index in [0, n). Modulo bias is irrelevant at test scale.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

/// Standard normal via Box-Muller. The spare value is discarded so each draw
/// consumes a fixed number of engine steps.
inline double normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace graph_poincare
