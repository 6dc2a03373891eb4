#pragma once

// Dyadic BMO: norms, oscillation level sets, the exp L^{1/m} oscillation
// average, and the corpus symbol generators.

#include <cstdint>
#include <string>
#include <string_view>

#include "entropy_fs/grid.hpp"
#include "entropy_fs/orlicz.hpp"

namespace efs {

/// max over lattice-0 cubes of levels 0..J of ⟨|b - b_Q|⟩_Q
double dyadic_bmo_norm(const GridFunction& b);

class BmoSymbol {
 public:
  explicit BmoSymbol(GridFunction values);

  const GridFunction& values() const { return values_; }
  double norm() const { return norm_; }
  /// b / ‖b‖_d; throws DegenerateInputError for constant b.
  BmoSymbol normalized() const;

 private:
  GridFunction values_;
  double norm_;
};

/// |{x ∈ Q : |b(x) - b_Q| > λ}|
double oscillation_level_measure(const GridFunction& b, const DyadicCube& q, double lambda);

/// ‖ |b - b_Q|^m ‖_{exp L^{1/m}, Q}
double oscillation_exp_norm(const GridFunction& b, const DyadicCube& q, int m,
                            const ToleranceConfig& cfg = {});

struct SymbolSpec {
  enum class Kind { Haar, LogDist, Martingale };
  Kind kind = Kind::Haar;
  std::uint64_t seed = 0;
  int depth = 0;

  /// `haar`, `logdist`, `martingale:SEED:DEPTH`
  static SymbolSpec parse(std::string_view spec);
  std::string to_string() const;
};

/// haar: χ_[0,1/2) - χ_[1/2,1); logdist: log(1/x) at cell midpoints;
/// martingale: Σ_{levels < depth} σ_I (χ_{I_left} - χ_{I_right}) with signs
/// from hash_coords(seed, level, index).
GridFunction generate_symbol(const SymbolSpec& spec, int level_J);

}  // namespace efs
