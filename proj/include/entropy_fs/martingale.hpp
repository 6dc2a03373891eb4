#pragma once

// The dyadic martingale transform Tf = Σ_I σ_I ⟨f, h_I⟩ h_I / |I| over lattice-0
// intervals of levels 0..J-1, with h_I = χ_{I_left} - χ_{I_right}, and its
// iterated commutators T_b^m f = [b, T_b^{m-1}] f.

#include <cstdint>
#include <optional>
#include <string>

#include "entropy_fs/grid.hpp"

namespace efs {

class SignPattern {
 public:
  /// +1 on even levels, -1 on odd levels.
  static SignPattern alternating() { return SignPattern(std::nullopt); }
  /// Signs from the top bit of hash_coords(seed, level, index).
  static SignPattern random(std::uint64_t seed) { return SignPattern(seed); }

  double operator()(int level, std::int64_t index) const;
  std::string to_string() const;

 private:
  explicit SignPattern(std::optional<std::uint64_t> seed) : seed_(seed) {}
  std::optional<std::uint64_t> seed_;
};

GridFunction martingale_transform(const GridFunction& f, const SignPattern& signs);

/// T_b^0 = T; T_b^m f = b·T_b^{m-1} f - T_b^{m-1}(b f).
GridFunction iterated_commutator(const GridFunction& b, const GridFunction& f,
                                 const SignPattern& signs, int m);

}  // namespace efs
