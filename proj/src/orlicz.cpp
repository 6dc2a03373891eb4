#include "entropy_fs/orlicz.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/simd.hpp"

namespace efs {
namespace {

constexpr double kE = std::numbers::e;

double parse_number(std::string_view text, std::string_view context) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw UsageError(std::string(context) + ": cannot parse number `" + std::string(text) + "`");
  return v;
}

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void ToleranceConfig::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");
}

YoungFunction YoungFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("power Young function needs p >= 1");
  return {Kind::Power, p};
}

YoungFunction YoungFunction::phi_k(int k) {
  if (k < 0) throw DomainError("Φ_k needs k >= 0");
  return {Kind::PhiK, static_cast<double>(k)};
}

YoungFunction YoungFunction::llogl(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("L(log L)^γ needs γ > 0");
  return {Kind::LLogLPow, gamma};
}

YoungFunction YoungFunction::loglog(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("L(log log L)^γ needs γ > 0");
  return {Kind::LogLogPow, gamma};
}

YoungFunction YoungFunction::exp_pow(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("exp L^β needs β > 0");
  return {Kind::ExpPow, beta};
}

YoungFunction YoungFunction::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw UsageError("Young function spec `" + std::string(spec) + "` needs the form kind:param");
  const auto kind = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  try {
    if (kind == "power") return power(parse_number(arg, "power"));
    if (kind == "phik") {
      const double k = parse_number(arg, "phik");
      if (k != std::floor(k)) throw UsageError("phik needs an integer k");
      return phi_k(static_cast<int>(k));
    }
    if (kind == "llogl") return llogl(parse_number(arg, "llogl"));
    if (kind == "loglog") return loglog(parse_number(arg, "loglog"));
    if (kind == "exppow") return exp_pow(parse_number(arg, "exppow"));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown Young function kind `" + std::string(kind) + "`");
}

std::string YoungFunction::to_string() const {
  switch (kind_) {
    case Kind::Power: return "power:" + format_param(param_);
    case Kind::PhiK: return "phik:" + format_param(param_);
    case Kind::LLogLPow: return "llogl:" + format_param(param_);
    case Kind::LogLogPow: return "loglog:" + format_param(param_);
    case Kind::ExpPow: return "exppow:" + format_param(param_);
  }
  return {};
}

double YoungFunction::operator()(double t) const {
  if (t < 0.0 || std::isnan(t)) throw DomainError("Young function evaluated at negative t");
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power: return std::pow(t, param_);
    case Kind::PhiK: {
      const double l = std::log(kE + t);
      double r = t;
      for (int i = 0; i < static_cast<int>(param_); ++i) r *= l;
      return r;
    }
    case Kind::LLogLPow: return t * std::pow(std::log(kE + t), param_);
    case Kind::LogLogPow: return t * std::pow(std::log(std::exp(kE) + std::log(kE + t)), param_);
    case Kind::ExpPow: return std::expm1(std::pow(t, param_));
  }
  return 0.0;
}

int YoungFunction::kernel_exponent() const {
  switch (kind_) {
    case Kind::Power:
      if (param_ == std::floor(param_) && param_ <= 16.0) return static_cast<int>(param_);
      return -1;
    case Kind::PhiK: return static_cast<int>(param_);
    default: return -1;
  }
}

double YoungFunction::inverse(double s, const ToleranceConfig& cfg) const {
  cfg.validate();
  if (s < 0.0 || std::isnan(s)) throw DomainError("Young inverse needs s >= 0");
  if (s == 0.0) return 0.0;
  const YoungFunction& a = *this;
  const double tol = cfg.rel_tol * std::max(s, 1.0);

  double lo = 1.0;
  double hi = 1.0;
  int grow = 0;
  while (a(hi) < s) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 2100) throw NumericError("Young inverse: no upper bracket for s=" + std::to_string(s));
  }
  while (a(lo) > s) {
    hi = lo;
    lo *= 0.5;
    if (++grow > 2100 || lo == 0.0) return lo;
  }
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) return mid;  // bracket exhausted at double precision
    const double v = a(mid);
    if (std::abs(v - s) <= tol) return mid;
    (v < s ? lo : hi) = mid;
  }
  throw NumericError("Young inverse of " + to_string() + " at s=" + std::to_string(s) +
                     " did not converge; bracket [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
}

double modular_mean(std::span<const double> cells, const YoungFunction& a, double lambda) {
  const double scale = 1.0 / lambda;
  const auto& k = simd::active_kernels();
  const double n = static_cast<double>(cells.size());
  const int e = a.kernel_exponent();
  if (e >= 0 && a.kind() == YoungFunction::Kind::PhiK) return k.sum_phik(cells, scale, e) / n;
  if (e >= 1) return k.sum_power(cells, scale, e) / n;
  double acc = 0.0;
  for (double v : cells) acc += a(std::abs(v) * scale);
  return acc / n;
}

double luxemburg_norm(std::span<const double> cells, const YoungFunction& a,
                      const ToleranceConfig& cfg) {
  return luxemburg_norm_padded(cells, cells.size(), a, cfg);
}

double luxemburg_norm_padded(std::span<const double> cells, std::size_t total,
                             const YoungFunction& a, const ToleranceConfig& cfg) {
  cfg.validate();
  if (total < cells.size()) throw DomainError("padded Luxemburg norm: total below support size");
  double top = 0.0;
  for (double v : cells) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;

  const double share = static_cast<double>(cells.size()) / static_cast<double>(total);
  auto feasible = [&](double lambda) { return share * modular_mean(cells, a, lambda) <= 1.0; };
  double lo = top * 1e-9;
  double hi = top;
  int it = 0;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++it > cfg.max_iter)
      throw NumericError("Luxemburg norm: no feasible λ below " + std::to_string(hi));
  }
  while (feasible(lo)) {
    hi = lo;
    lo *= 0.5;
    if (++it > cfg.max_iter)
      throw NumericError("Luxemburg norm: no infeasible λ above " + std::to_string(lo));
  }
  // geometric bisection: the bracket starts at a ratio of up to 1e9
  for (it = 0; it < cfg.max_iter; ++it) {
    if (hi <= lo * (1.0 + cfg.rel_tol)) return hi;
    const double mid = std::sqrt(lo * hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  throw NumericError("Luxemburg norm for " + a.to_string() + " did not converge; bracket [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

double luxemburg_norm(const GridFunction& f, const DyadicCube& q, const YoungFunction& a,
                      const ToleranceConfig& cfg) {
  return luxemburg_norm(restrict_to(f, q), a, cfg);
}

double indicator_norm(const YoungFunction& a, double ratio, const ToleranceConfig& cfg) {
  if (!(ratio >= 1.0)) throw DomainError("indicator_norm needs |Q|/|E| >= 1");
  return 1.0 / a.inverse(ratio, cfg);
}

double entropy_integral(const GridFunction& w, const DyadicCube& q, int k) {
  if (k < 0) throw DomainError("entropy_integral needs k >= 0");
  const auto cells = restrict_to(w, q);
  const double n = static_cast<double>(cells.size());
  const double avg = simd::active_kernels().sum(cells) / n;
  if (!(avg > 0.0)) throw DegenerateInputError("entropy_integral: weight vanishes on " + to_string(q));
  double acc = 0.0;
  for (double v : cells) {
    double term = v;
    const double l = std::log(kE + v / avg);
    for (int i = 0; i < k; ++i) term *= l;
    acc += term;
  }
  return acc / n;
}

}  // namespace efs
