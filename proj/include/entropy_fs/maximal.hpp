#pragma once

// Hardy–Littlewood, Orlicz and entropy-bump maximal operators on the dyadic
// grid, and the entropy densities ρ_w(Q) (localized maximal function) and
// ρ_{k,w}(Q) = ‖w‖_{L(log L)^k,Q} / ⟨w⟩_Q.

#include <string>
#include <string_view>
#include <vector>

#include "entropy_fs/grid.hpp"
#include "entropy_fs/orlicz.hpp"

namespace efs {

class EpsilonFunction {
 public:
  enum class Kind { Const, LogPow, Pow };

  static EpsilonFunction constant(double c);
  /// (log₂(2+t))^{1+δ}
  static EpsilonFunction log_pow(double delta);
  /// t^δ
  static EpsilonFunction pow(double delta);
  /// `const:c`, `logpow:δ`, `pow:δ`
  static EpsilonFunction parse(std::string_view spec);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  std::string to_string() const;

  double operator()(double t) const;
  /// 1/ε(2^{2^r}), evaluated without forming 2^{2^r}.
  double tower_reciprocal(int r) const;

 private:
  EpsilonFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

struct EntropyProfile {
  YoungFunction bump;
  int k = 1;
  EpsilonFunction eps;
};

GridFunction dyadic_maximal(const GridFunction& f, const LatticeSet& lattices);

/// (1/w(Q)) ∫_Q M(χ_Q w), with M localized to the dyadic subcubes of Q.
/// Returns 1 when w(Q) = 0.
double rho_rahm(const GridFunction& w, const DyadicCube& q);

/// ‖w‖_{Φ_k,Q} / ⟨w⟩_Q; 1 when w(Q) = 0.
double rho_k(const GridFunction& w, const DyadicCube& q, int k, const ToleranceConfig& cfg = {});

GridFunction orlicz_maximal(const GridFunction& w, const YoungFunction& a,
                            const LatticeSet& lattices, const ToleranceConfig& cfg = {});

/// Per-cube Luxemburg averages and entropy densities. Building this is the
/// expensive part of M_{ε,A,k}; evaluating it for several ε is cheap.
class EntropyTable {
 public:
  EntropyTable(const GridFunction& w, const YoungFunction& bump, int k, const LatticeSet& lattices,
               const ToleranceConfig& cfg = {});

  struct Entry {
    DyadicCube cube;
    CellRange cells;
    double bump_average;  // ⟨w⟩_{A,Q}
    double rho;           // ρ_{k,w}(Q)
  };

  int level() const { return level_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// M_{ε,A,k} w
  GridFunction maximal(const EpsilonFunction& eps) const;

 private:
  int level_;
  std::vector<Entry> entries_;
};

GridFunction entropy_maximal(const GridFunction& w, const EntropyProfile& profile,
                             const LatticeSet& lattices, const ToleranceConfig& cfg = {});

/// max(Σ_{r=0}^{R} 1/ε(2^{2^r}), 1)
double epsilon_series(const EpsilonFunction& eps, int R);

}  // namespace efs
