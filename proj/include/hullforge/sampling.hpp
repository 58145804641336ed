#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <algorithm>
#include <random>
#include <vector>

#include "hullforge/laurent.hpp"

namespace hullforge {

/// Radical inverse of `index` in `base` (one coordinate of a Halton point).
inline double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

/// Area-uniform low-discrepancy point of the open unit disc (index >= 1).
inline Complex halton_disc_point(std::uint64_t index) {
  const double rho = std::sqrt(halton(index, 2));
  const double phi = 2.0 * std::numbers::pi * halton(index, 3);
  return std::polar(rho, phi);
}

inline Complex unit_circle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Angle folded into [0, 2*pi).
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

/// Distance between two angles on the circle, in [0, pi].
inline double angle_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

/// Deterministic stream derived from a base seed and a tuple of labels, so that
/// parallel workers draw the same numbers regardless of scheduling.
inline std::mt19937_64 derived_rng(std::uint64_t seed, std::initializer_list<std::uint32_t> labels) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  words.insert(words.end(), labels.begin(), labels.end());
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace hullforge
