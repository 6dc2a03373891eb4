#pragma once

#include <cstdint>

namespace efs {

/// SplitMix64 finalizer. Every seeded quantity in the library is a pure
/// function of (seed, coordinates) chained through this mixer, so results do
/// not depend on evaluation order.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_coords(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

/// Uniform double in [0,1) from the top 53 bits.
constexpr double unit_interval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Standard normal via Box–Muller on two hashed uniforms.
double hashed_normal(std::uint64_t seed, std::uint64_t index);

}  // namespace efs
