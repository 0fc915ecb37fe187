#pragma once

#include <kernelforge/series.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace kernelforge {

/// Uniform on the open interval (0, 1) from the top 53 bits of the engine,
/// so that seeded runs agree across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform in the closed disk of the given radius.
inline cplx uniform_disk(std::mt19937_64& rng, double radius) {
  const double r = radius * std::sqrt(uniform01(rng));
  return std::polar(r, 2.0 * std::numbers::pi * uniform01(rng));
}

}  // namespace kernelforge
