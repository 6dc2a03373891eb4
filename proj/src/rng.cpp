#include "entropy_fs/rng.hpp"

#include <cmath>
#include <numbers>

namespace efs {

double hashed_normal(std::uint64_t seed, std::uint64_t index) {
  const double u1 = 1.0 - unit_interval(hash_coords(seed, index, 1));  // (0,1]
  const double u2 = unit_interval(hash_coords(seed, index, 2));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace efs
