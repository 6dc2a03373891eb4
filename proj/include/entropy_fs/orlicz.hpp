#pragma once

// Young functions and Luxemburg (Orlicz) averages over dyadic cubes.

#include <string>
#include <string_view>

#include "entropy_fs/grid.hpp"

namespace efs {

struct ToleranceConfig {
  double rel_tol = 1e-10;
  int max_iter = 200;

  void validate() const;
};

class YoungFunction {
 public:
  enum class Kind {
    Power,      // t^p, p >= 1
    PhiK,       // t·log^k(e+t), integer k >= 0
    LLogLPow,   // t·log^γ(e+t), γ > 0
    LogLogPow,  // t·log^γ(e^e + log(e+t)), γ > 0
    ExpPow,     // e^{t^β} - 1, β > 0
  };

  static YoungFunction power(double p);
  static YoungFunction phi_k(int k);
  static YoungFunction llogl(double gamma);
  static YoungFunction loglog(double gamma);
  static YoungFunction exp_pow(double beta);

  /// `power:p`, `phik:k`, `llogl:γ`, `loglog:γ`, `exppow:β`.
  static YoungFunction parse(std::string_view spec);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  std::string to_string() const;

  /// A(t); throws DomainError for t < 0.
  double operator()(double t) const;

  /// t with |A(t) - s| <= rel_tol·max(s,1), by bisection on a geometrically
  /// grown bracket.
  double inverse(double s, const ToleranceConfig& cfg = {}) const;

  /// Integer exponent for the Power/PhiK kinds that have a SIMD modular kernel, else -1.
  int kernel_exponent() const;

  bool operator==(const YoungFunction&) const = default;

 private:
  YoungFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

/// (1/n) Σ A(|x_i| / λ) over the given cells.
double modular_mean(std::span<const double> cells, const YoungFunction& a, double lambda);

/// inf{λ > 0 : (1/n) Σ A(|x_i|/λ) <= 1}; 0 when every cell is 0.
double luxemburg_norm(std::span<const double> cells, const YoungFunction& a,
                      const ToleranceConfig& cfg = {});

/// Norm of `cells` extended by zeros to `total` cells; A(0) = 0 makes the
/// padding free.
double luxemburg_norm_padded(std::span<const double> cells, std::size_t total,
                             const YoungFunction& a, const ToleranceConfig& cfg = {});

double luxemburg_norm(const GridFunction& f, const DyadicCube& q, const YoungFunction& a,
                      const ToleranceConfig& cfg = {});

/// ‖χ_E‖_{A,Q} = 1 / A^{-1}(|Q|/|E|) for ratio = |Q|/|E| >= 1.
double indicator_norm(const YoungFunction& a, double ratio, const ToleranceConfig& cfg = {});

/// (1/|Q|) Σ w·log^k(e + w/⟨w⟩_Q)·|cell|. Throws DegenerateInputError when w ≡ 0 on Q.
double entropy_integral(const GridFunction& w, const DyadicCube& q, int k);

}  // namespace efs
