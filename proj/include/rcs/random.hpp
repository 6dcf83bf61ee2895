#pragma once
#ifndef RCS_RANDOM_HPP
#define RCS_RANDOM_HPP

#include "rcs/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace rcs {

using Rng = std::mt19937_64;

/// Per-purpose stream tags. Each generator draws from its own stream so that,
/// e.g., changing the outlier count leaves the clean signal untouched.
enum class Stream : std::uint64_t {
  support = 0x5350'5054,  // spectral positions, phases, amplitudes
  gaussian = 0x4741'5553, // inlier noise
  impulse = 0x494d'5055,  // outlier positions and values
  ransac = 0x5241'4e53,   // subset draws
  run = 0x5255'4e49,      // per-run seeds of an experiment
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e37'79b9'7f4a'7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58'476d'1ce4'e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d0'49bb'1331'11ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                    std::uint64_t index = 0) noexcept {
  return mix64(mix64(master + static_cast<std::uint64_t>(tag)) ^ mix64(index));
}

inline Rng make_rng(std::uint64_t master, Stream tag, std::uint64_t index = 0) {
  return Rng(derive_seed(master, tag, index));
}

/// `count` distinct values drawn uniformly from [0, n) by a partial
/// Fisher-Yates shuffle. Returned in draw order.
inline std::vector<std::size_t> random_subset(std::size_t n, std::size_t count, Rng &rng) {
  if (count > n)
    throw InvalidArgument("cannot draw " + std::to_string(count) + " distinct values from " +
                          std::to_string(n));
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

} // namespace rcs

#endif // RCS_RANDOM_HPP
