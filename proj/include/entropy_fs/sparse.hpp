#pragma once

// α-Carleson (sparse) families on lattice 0, the stopping-time construction,
// the stratification and stopping decompositions used in the weak-type
// argument for T^{m,m}_{b,S}, and the sparse commutator operators
//   T^{h,m}_{b,S} f(x) = Σ_{Q∈S} |b(x) - b_Q|^h ⟨|b - b_Q|^{m-h} f⟩_Q χ_Q(x).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "entropy_fs/grid.hpp"
#include "entropy_fs/martingale.hpp"
#include "entropy_fs/orlicz.hpp"

namespace efs {

/// Nonnegative rational with 64-bit parts; Carleson constants are ratios of
/// dyadic measures and are kept exactly.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational reduced() const;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator==(const Rational& a, const Rational& b);
};

/// max over Q of Σ_{Q'⊆Q} |Q'| / |Q|, exact. Throws DomainError for an empty
/// or mixed-lattice family.
Rational carleson_constant(std::span<const DyadicCube> cubes);
/// The constant together with a cube attaining it.
std::pair<Rational, DyadicCube> carleson_constant_with_witness(std::span<const DyadicCube> cubes);

class CarlesonFamily {
 public:
  /// Sorts and deduplicates, then computes the Carleson constant exactly.
  static CarlesonFamily verified(std::vector<DyadicCube> cubes);

  const std::vector<DyadicCube>& cubes() const { return cubes_; }
  std::size_t size() const { return cubes_.size(); }
  Rational alpha_exact() const { return alpha_; }
  double alpha() const { return alpha_.value(); }
  bool contains(const DyadicCube& q) const;

 private:
  CarlesonFamily(std::vector<DyadicCube> cubes, Rational alpha)
      : cubes_(std::move(cubes)), alpha_(alpha) {}

  std::vector<DyadicCube> cubes_;
  Rational alpha_;
};

CarlesonFamily join(const CarlesonFamily& a, const CarlesonFamily& b);

/// Family text format: `alpha=<value>` header, then one `lattice level index` per line.
void write_family(std::ostream& out, const CarlesonFamily& s);
/// Re-verifies the constant; a header that disagrees with it is a UsageError.
CarlesonFamily read_family(std::istream& in);

/// Calderón–Zygmund stopping time from [0,1): a descendant Q' of a stopping
/// cube P is selected when it is maximal with ⟨f⟩_{Q'} > ratio·⟨f⟩_P.
CarlesonFamily build_sparse_from_function(const GridFunction& f, double ratio);

/// k >= 1 with 56^{-m(k+1)} < avg <= 56^{-mk}; 0 when avg > 56^{-m}; -1 when avg = 0.
int average_band(double avg, int m);
/// r >= 0 with 2^{2^r} <= ρ < 2^{2^{r+1}}; -1 when ρ < 2.
int rho_band(double rho);

struct Stratification {
  int m = 1;
  std::map<int, std::vector<DyadicCube>> s1;                    // k -> cubes with ρ_{m+1,w} < 2
  std::map<std::pair<int, int>, std::vector<DyadicCube>> s2;    // (r, k)
  std::vector<DyadicCube> out_of_band;                          // ⟨f⟩_Q > 56^{-m}
  std::vector<DyadicCube> zero_average;                         // ⟨f⟩_Q = 0

  std::vector<DyadicCube> s1_cubes() const;
  std::size_t total() const;
};

Stratification stratify(const CarlesonFamily& s, const GridFunction& f, const GridFunction& w,
                        int m, const ToleranceConfig& cfg = {});

struct StoppingDecomposition {
  struct Entry {
    DyadicCube cube;
    int generation = 0;
    CellSet stopping_set;  // E_Q = Q minus the strictly smaller band cubes inside Q
    CellSet layer_union;   // Q^t = union of generation (g+t) cubes inside Q
    CellSet tilde_set;     // Ẽ_Q = ∪_{s=1..t} Q minus ∪ generation (g+s) cubes
  };

  struct Check {
    bool stopping_identity = true;  // E_Q via next generation == E_Q via all smaller cubes
    bool overlap_bounded = true;    // Σ_Q χ_{Ẽ_Q} <= t
    bool layer_decay = true;        // |Q^t| <= (α-1)^t |Q|, exact
    int max_overlap = 0;
    bool ok() const { return stopping_identity && overlap_bounded && layer_decay; }
  };

  int level = 1;
  int t = 1;
  Rational alpha;
  std::vector<std::vector<DyadicCube>> generations;
  std::vector<Entry> entries;

  Check verify() const;
};

StoppingDecomposition stopping_decomposition(std::span<const DyadicCube> band, int level_J, int t);

/// F_k(Q) = {x ∈ Q : |b - b_Q|^m > 2^m e^m 4^{m(k+τ)}} (n = 1).
CellSet exceptional_sets(const GridFunction& b, const DyadicCube& q, int m, int k, double tau);

/// Smallest τ in {0, 0.5, 1, 2} for which (log(e+log t)/log t)^m is decreasing
/// on a numeric grid of t >= e^{4^{1+τ}-1}.
double default_tau(int m);

GridFunction sparse_commutator_apply(const CarlesonFamily& s, const GridFunction& b,
                                     const GridFunction& f, int h, int m);

/// Σ_{h=0}^{m} T^{h,m}_{b,S} f
GridFunction sparse_commutator_sum(const CarlesonFamily& s, const GridFunction& b,
                                   const GridFunction& f, int m);

struct DominationReport {
  double constant = 0.0;          // min c with |T_b^m f| <= c Σ_h T^{h,m}_{b,S} f
  std::size_t infinite_cells = 0; // cells with a vanishing right side and nonzero left side
  double max_lhs = 0.0;
  double noise_floor = 0.0;       // |T_b^m f| at or below this counts as zero
  std::size_t family_size = 0;
  double family_alpha = 0.0;
};

DominationReport pointwise_domination_check(const GridFunction& b, const GridFunction& f,
                                            const SignPattern& signs, int m);

}  // namespace efs
