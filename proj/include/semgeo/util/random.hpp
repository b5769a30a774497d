#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace semgeo {

/// Seeds a 64-bit Mersenne Twister from a list of 32-bit words.
/// std::seed_seq and std::mt19937_64 are fully specified, so streams are
/// identical across standard libraries.
inline std::mt19937_64 make_engine(std::span<const std::uint32_t> words) {
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

inline void push_u64(std::vector<std::uint32_t>& words, std::uint64_t v) {
  words.push_back(static_cast<std::uint32_t>(v & 0xFFFFFFFFu));
  words.push_back(static_cast<std::uint32_t>(v >> 32));
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; portable unlike std::normal_distribution.
inline double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace semgeo
