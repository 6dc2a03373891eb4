#include "entropy_fs/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "entropy_fs/errors.hpp"
#include "entropy_fs/specs.hpp"

namespace efs {
namespace {

const std::vector<std::string> kAllExperiments = {"fs", "perez", "rahm", "tmbs", "t0m", "main", "domination"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto item = trim(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& where) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw UsageError(where + ": bad number `" + s + "`");
  return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw UsageError(where + ": expected true/false, got `" + s + "`");
}

}  // namespace

SweepConfig SweepConfig::defaults() {
  const auto& corpus = default_corpus();
  SweepConfig c;
  c.experiments = kAllExperiments;
  c.levels = {10};
  c.ms = {1};
  c.weights = corpus.weights;
  c.functions = corpus.functions;
  c.symbols = corpus.symbols;
  c.epsilons = {"logpow:1"};
  return c;
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig c = SweepConfig::defaults();
  std::string line;
  std::set<std::string> seen;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string where = "config line " + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw UsageError(where + ": expected `key = value`");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) throw UsageError(where + ": duplicate key `" + key + "`");

    auto ints = [&] {
      std::vector<int> v;
      for (const auto& s : split_list(value)) v.push_back(parse_number<int>(s, where));
      return v;
    };
    try {
      if (key == "experiments") {
        c.experiments = split_list(value);
        for (const auto& e : c.experiments)
          if (std::find(kAllExperiments.begin(), kAllExperiments.end(), e) == kAllExperiments.end() &&
              e != "main-direct")
            throw UsageError(where + ": unknown experiment `" + e + "`");
      } else if (key == "levels") {
        c.levels = ints();
      } else if (key == "m") {
        c.ms = ints();
      } else if (key == "weights") {
        c.weights = split_list(value);
      } else if (key == "functions") {
        c.functions = split_list(value);
      } else if (key == "bmo") {
        c.symbols = split_list(value);
      } else if (key == "epsilon") {
        c.epsilons = split_list(value);
        for (const auto& e : c.epsilons) EpsilonFunction::parse(e);
      } else if (key == "t_grid") {
        const bool rel = c.base.t_grid.relative;
        c.base.t_grid = TGrid::parse(value);
        c.base.t_grid.relative = rel;
      } else if (key == "t_abs") {
        c.base.t_grid.relative = !parse_bool(value, where);
      } else if (key == "series_R") {
        c.base.series_R = parse_number<int>(value, where);
      } else if (key == "ratio") {
        c.base.sparse_ratio = parse_number<double>(value, where);
      } else if (key == "seed") {
        c.base.seed = parse_number<std::uint64_t>(value, where);
      } else if (key == "rho") {
        c.base.rho = parse_number<double>(value, where);
      } else if (key == "tol") {
        c.base.tol.rel_tol = parse_number<double>(value, where);
      } else if (key == "model") {
        if (value == "sparse") c.base.model = ModelOperator::Sparse;
        else if (value == "martingale") c.base.model = ModelOperator::Martingale;
        else throw UsageError(where + ": model must be sparse or martingale");
      } else if (key == "mode") {
        if (value == "a" || value == "direct") c.base.mode = CommutatorMode::Direct;
        else if (value == "b" || value == "dominating") c.base.mode = CommutatorMode::Dominating;
        else throw UsageError(where + ": mode must be a or b");
      } else if (key == "exact_weak") {
        c.base.exact_weak = parse_bool(value, where);
      } else if (key == "lattices") {
        LatticeSet l;
        for (int v : ints()) {
          if (v < 0 || v > 2) throw UsageError(where + ": lattice index must be 0, 1 or 2");
          l.push_back(v);
        }
        c.base.lattices = l;
      } else if (key == "timing") {
        c.timing = parse_bool(value, where);
      } else {
        throw UsageError(where + ": unknown key `" + key + "`");
      }
    } catch (const Error& e) {
      if (std::string_view(e.what()).starts_with("config line")) throw;
      throw UsageError(where + ": " + e.what());
    }
  }
  for (int J : c.levels)
    if (J < 1 || J > kMaxLevel) throw UsageError("config: level " + std::to_string(J) + " out of range");
  return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config `" + path.string() + "`");
  return parse_sweep_config(in);
}

std::vector<RatioReport> run_sweep(const SweepConfig& cfg, ExperimentCache* cache) {
  ExperimentCache local;
  ExperimentCache& c = cache ? *cache : local;
  const std::vector<std::string> once = {""};
  std::vector<RatioReport> rows;
  for (const auto& name : cfg.experiments) {
    const bool sym = experiment_uses_symbol(name);
    const bool eps = experiment_uses_epsilon(name);
    const auto& symbols = sym ? cfg.symbols : once;
    const auto& epsilons = eps ? cfg.epsilons : once;
    for (int J : cfg.levels)
      for (int m : cfg.ms)
        for (const auto& w : cfg.weights)
          for (const auto& f : cfg.functions)
            for (const auto& b : symbols)
              for (const auto& e : epsilons) {
                ExperimentConfig x = cfg.base;
                x.level = J;
                x.m = m;
                x.weight = w;
                x.function = f;
                if (sym) x.bmo = b;
                if (eps) x.epsilon = e;
                auto out = run_experiment(name, x, &c);
                rows.insert(rows.end(), std::make_move_iterator(out.begin()), std::make_move_iterator(out.end()));
              }
  }
  return rows;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<RatioReport>& rows, bool timing) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.level << ',' << r.m << ',' << r.weight << ',' << r.function << ','
        << r.bmo << ',' << r.epsilon << ',' << format_number(r.t) << ',' << format_number(r.lhs) << ','
        << format_number(r.rhs) << ',' << format_number(r.ratio) << ','
        << (timing ? format_number(r.wall_ms) : std::string("NA")) << '\n';
  }
}

nlohmann::ordered_json summarize(const std::vector<RatioReport>& rows) {
  using nlohmann::ordered_json;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RatioReport*>> by_exp;
  for (const auto& r : rows) {
    if (!by_exp.count(r.experiment)) order.push_back(r.experiment);
    by_exp[r.experiment].push_back(&r);
  }
  ordered_json out = ordered_json::object();
  for (const auto& name : order) {
    const auto& rs = by_exp[name];
    const RatioReport* best = nullptr;
    std::size_t infinite = 0;
    std::map<int, double> per_level;
    for (const auto* r : rs) {
      if (r->infinite) {
        ++infinite;
        continue;
      }
      if (!best || r->ratio > best->ratio) best = r;
      auto [it, fresh] = per_level.emplace(r->level, r->ratio);
      if (!fresh) it->second = std::max(it->second, r->ratio);
    }
    ordered_json e;
    e["max_ratio"] = best ? ordered_json(best->ratio) : ordered_json(nullptr);
    if (best) {
      e["argmax_params"] = {{"J", best->level},         {"m", best->m},
                            {"weight", best->weight},   {"function", best->function},
                            {"bmo", best->bmo},         {"epsilon", best->epsilon},
                            {"t", best->t}};
    } else {
      e["argmax_params"] = nullptr;
    }
    ordered_json drift = ordered_json::array();
    for (const auto& [J, lo] : per_level) {
      const auto hi = per_level.find(J + 2);
      if (hi == per_level.end()) continue;
      const double a = lo, b = hi->second;
      double factor = 1.0;
      if (a > 0.0 && b > 0.0) factor = std::max(a, b) / std::min(a, b);
      else if (a > 0.0 || b > 0.0) factor = std::numeric_limits<double>::infinity();
      drift.push_back({{"J", J},
                       {"J2", J + 2},
                       {"max_ratio_J", a},
                       {"max_ratio_J2", b},
                       {"factor", std::isfinite(factor) ? ordered_json(factor) : ordered_json("inf")},
                       {"stable", factor < 2.0}});
    }
    e["drift_J_pairs"] = drift;
    e["rows"] = rs.size();
    e["infinite_rows"] = infinite;
    out[name] = e;
  }
  return out;
}

}  // namespace efs
