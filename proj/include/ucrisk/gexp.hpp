#ifndef UCRISK_GEXP_HPP
#define UCRISK_GEXP_HPP

// Discrete G-expectation under uncertain volatility. The coordinate process
// moves by ±σᵢ√Δt in each dimension with probability 1/2 per sign; an
// adversary who sees the path so far picks σ from a finite grid at every
// node. The G-expectation of a path payoff is the supremum of its
// expectation over all such adapted strategies, computed by backward
// induction over the non-recombining tree.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucrisk/scenario.hpp"

namespace ucrisk {

/// Largest d·K accepted by build_lattice.
inline constexpr std::size_t kMaxLatticeSize = 24;

struct LatticeParams {
  std::size_t steps = 1;    // K
  double horizon = 1.0;     // T
  std::size_t dims = 1;     // d
  std::vector<double> sigma_low;
  std::vector<double> sigma_high;
  std::vector<std::vector<double>> sigma_grid;  ///< per dimension, ascending, contains both bounds

  /// Same bounds in every dimension and the two-point grid {lo, hi}.
  static LatticeParams uniform(std::size_t steps, double horizon, std::size_t dims, double lo, double hi) {
    LatticeParams p{steps, horizon, dims, std::vector<double>(dims, lo), std::vector<double>(dims, hi), {}};
    std::vector<double> grid = lo == hi ? std::vector<double>{lo} : std::vector<double>{lo, hi};
    p.sigma_grid.assign(dims, grid);
    return p;
  }

  double dt() const { return horizon / static_cast<double>(steps); }

  void validate() const {
    if (steps < 1) throw std::invalid_argument("lattice needs at least one step");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
    if (dims < 1 || dims > 2) throw std::invalid_argument("lattice dimension must be 1 or 2");
    if (sigma_low.size() != dims || sigma_high.size() != dims || sigma_grid.size() != dims)
      throw std::invalid_argument("volatility bounds must be given per dimension");
    for (std::size_t i = 0; i < dims; ++i) {
      if (!(sigma_low[i] > 0.0 && sigma_low[i] <= sigma_high[i]))
        throw std::invalid_argument("volatility bounds need 0 < low <= high");
      const auto& g = sigma_grid[i];
      if (g.empty() || !std::is_sorted(g.begin(), g.end()) ||
          std::adjacent_find(g.begin(), g.end()) != g.end())
        throw std::invalid_argument("volatility grid must be ascending without repeats");
      if (g.front() != sigma_low[i] || g.back() != sigma_high[i])
        throw std::invalid_argument("volatility grid must span exactly [low, high]");
    }
  }
};

/// Read-only view of a path B₁..B_K (row k-1 holds B at step k).
struct PathView {
  std::span<const double> values;
  std::size_t steps = 0;
  std::size_t dims = 0;

  PathView() = default;
  PathView(std::span<const double> v, std::size_t k, std::size_t d) : values(v), steps(k), dims(d) {}
  explicit PathView(const Path& p) : values(p.values), steps(p.steps), dims(p.dims) {}

  /// B at step k in dimension i; step 0 is the origin.
  double at(std::size_t k, std::size_t i) const { return k == 0 ? 0.0 : values[(k - 1) * dims + i]; }
  double terminal(std::size_t i) const { return at(steps, i); }
  double increment(std::size_t k, std::size_t i) const { return at(k, i) - at(k - 1, i); }
};

template <class F>
concept PathFunctional = std::invocable<const F&, const PathView&> &&
                         std::convertible_to<std::invoke_result_t<const F&, const PathView&>, double>;

/// Volatility chosen at every internal node of the sign tree, in level order.
struct Strategy {
  std::vector<std::vector<double>> sigma;
};

/// Measure on terminal paths plus the strategy that generated it, when there is one.
struct PathMeasure {
  Measure measure;
  std::optional<Strategy> strategy;
};

class VolLattice {
public:
  explicit VolLattice(LatticeParams params) : params_(std::move(params)) {
    params_.validate();
    if (params_.dims * params_.steps > kMaxLatticeSize)
      throw std::length_error("lattice size guard exceeded: d*K = " +
                              std::to_string(params_.dims * params_.steps) + " > " +
                              std::to_string(kMaxLatticeSize));
    dt_ = params_.dt();
    sqrt_dt_ = std::sqrt(dt_);
    branching_ = std::size_t{1} << params_.dims;

    // Lexicographic product of the per-dimension grids, smallest first.
    choices_.push_back({});
    for (std::size_t i = 0; i < params_.dims; ++i) {
      std::vector<std::vector<double>> next;
      for (const auto& prefix : choices_)
        for (double s : params_.sigma_grid[i]) {
          auto c = prefix;
          c.push_back(s);
          next.push_back(std::move(c));
        }
      choices_ = std::move(next);
    }
    increments_.reserve(choices_.size() * branching_ * params_.dims);
    for (const auto& c : choices_)
      for (std::size_t s = 0; s < branching_; ++s)
        for (std::size_t i = 0; i < params_.dims; ++i) increments_.push_back(sign(s, i) * c[i] * sqrt_dt_);

    std::size_t level = 1;
    for (std::size_t k = 0; k <= params_.steps; ++k) {
      level_offset_.push_back(internal_nodes_);
      if (k < params_.steps) internal_nodes_ += level;
      level *= branching_;
    }
  }

  const LatticeParams& params() const noexcept { return params_; }
  std::size_t steps() const noexcept { return params_.steps; }
  std::size_t dims() const noexcept { return params_.dims; }
  double dt() const noexcept { return dt_; }
  double sqrt_dt() const noexcept { return sqrt_dt_; }
  std::size_t branching() const noexcept { return branching_; }
  const std::vector<std::vector<double>>& choices() const noexcept { return choices_; }

  /// -1 or +1 for sign combination `code` in dimension i.
  static double sign(std::size_t code, std::size_t i) { return (code >> i) & 1u ? 1.0 : -1.0; }

  /// Increment in dimension i for volatility choice c and sign combination s.
  double increment(std::size_t c, std::size_t s, std::size_t i) const {
    return increments_[(c * branching_ + s) * params_.dims + i];
  }

  std::size_t internal_nodes() const noexcept { return internal_nodes_; }
  std::size_t terminal_paths() const noexcept { return std::size_t{1} << (params_.dims * params_.steps); }

  /// Index of the child of `node` (at `depth`) reached through sign combination s.
  std::size_t child(std::size_t depth, std::size_t node, std::size_t s) const {
    return level_offset_[depth + 1] + (node - level_offset_[depth]) * branching_ + s;
  }

  std::size_t level_offset(std::size_t depth) const { return level_offset_.at(depth); }

  double log2_strategy_count() const {
    return static_cast<double>(internal_nodes_) * std::log2(static_cast<double>(choices_.size()));
  }

  /// |choices|^(internal nodes) when it fits in 64 bits.
  std::optional<std::uint64_t> strategy_count() const {
    if (log2_strategy_count() >= 63.0) return std::nullopt;
    std::uint64_t n = 1;
    for (std::size_t j = 0; j < internal_nodes_; ++j) n *= choices_.size();
    return n;
  }

  /// Identifier of a path from its increments, e.g. "+0.3|-0.1".
  std::string path_id(std::span<const double> values) const {
    std::string id;
    char buf[32];
    for (std::size_t k = 0; k < params_.steps; ++k) {
      if (k) id += '|';
      for (std::size_t i = 0; i < params_.dims; ++i) {
        if (i) id += ',';
        double prev = k == 0 ? 0.0 : values[(k - 1) * params_.dims + i];
        double inc = values[k * params_.dims + i] - prev;
        id += inc < 0.0 ? '-' : '+';
        double sigma = std::abs(inc) / sqrt_dt_;
        auto res = std::to_chars(buf, buf + sizeof buf, sigma, std::chars_format::general, 12);
        id.append(buf, res.ptr);
      }
    }
    return id;
  }

private:
  LatticeParams params_;
  double dt_ = 0.0;
  double sqrt_dt_ = 0.0;
  std::size_t branching_ = 2;
  std::vector<std::vector<double>> choices_;
  std::vector<double> increments_;
  std::vector<std::size_t> level_offset_;
  std::size_t internal_nodes_ = 0;
};

inline VolLattice build_lattice(const LatticeParams& params) { return VolLattice(params); }

/// A book of path payoffs evaluated together: `size()` outputs written by
/// `f(path, out)`.
template <class F>
concept PathFunctionalBatch = requires(const F& f, const PathView& p, std::span<double> out) {
  { f.size() } -> std::convertible_to<std::size_t>;
  f(p, out);
};

/// Batch view of a single path functional.
template <PathFunctional F>
struct SingleFunctional {
  const F& f;
  std::size_t size() const { return 1; }
  void operator()(const PathView& p, std::span<double> out) const { out[0] = f(p); }
};

namespace detail {

/// Backward induction over the full tree of (choice, sign) moves for every
/// payoff of a batch at once. With `record` set, the argmax choice of every
/// internal node is kept per payoff so the maximizing strategies can be read
/// off without a second pass.
template <PathFunctionalBatch F>
class Backward {
public:
  Backward(const VolLattice& lat, const F& x, bool record = false)
      : lat_(lat), x_(x), m_(x.size()), buf_(lat.steps() * lat.dims(), 0.0),
        inv_branch_(1.0 / static_cast<double>(lat.branching())),
        scratch_(2 * (lat.steps() + 1) * x.size(), 0.0), arg_((lat.steps() + 1) * x.size(), 0) {
    if (m_ == 0) throw std::invalid_argument("empty payoff batch");
    if (!record) return;
    if (lat.choices().size() > 0xFFFF) throw std::length_error("too many volatility choices to record");
    const std::size_t fan = lat.choices().size() * lat.branching();
    std::size_t level = 1, total = 0;
    for (std::size_t k = 0; k < lat.steps(); ++k) {
      offset_.push_back(total);
      total += level;
      if (total * m_ > kMaxRecordedEntries)
        throw std::length_error("lattice too large to record the maximizing strategy");
      level *= fan;
    }
    best_.assign(total * m_, 0);
  }

  /// Values at the root, one per payoff.
  template <bool Record>
  std::vector<double> root() {
    std::vector<double> out(m_);
    value<Record>(0, 0, out.data());
    return out;
  }

  /// Sup over adapted strategies of the conditional expectation at `depth`,
  /// given the path already written into rows < depth; `idx` numbers the
  /// node among the full-tree nodes of its level.
  template <bool Record>
  void value(std::size_t depth, std::size_t idx, double* best) {
    const auto b = lat_.branching();
    const auto n_choices = lat_.choices().size();
    const bool last = depth + 1 == lat_.steps();
    double* sum = &scratch_[2 * depth * m_];
    double* child = sum + m_;
    std::uint16_t* arg = &arg_[depth * m_];
    std::fill(best, best + m_, -kInfinity);
    for (std::size_t c = 0; c < n_choices; ++c) {
      std::fill(sum, sum + m_, 0.0);
      for (std::size_t s = 0; s < b; ++s) {
        write_row(depth, c, s);
        if (last) {
          x_(PathView(buf_, lat_.steps(), lat_.dims()), std::span<double>(child, m_));
        } else {
          value<Record>(depth + 1, Record ? (idx * n_choices + c) * b + s : 0, child);
        }
        for (std::size_t j = 0; j < m_; ++j) sum[j] += child[j];
      }
      for (std::size_t j = 0; j < m_; ++j) {
        double v = sum[j] * inv_branch_;
        if (v > best[j]) {
          best[j] = v;
          if constexpr (Record) arg[j] = static_cast<std::uint16_t>(c);
        }
      }
    }
    if constexpr (Record)
      for (std::size_t j = 0; j < m_; ++j)
        best_[(offset_[depth] + idx) * m_ + j] = arg[j];
  }

  std::size_t best_choice(std::size_t depth, std::size_t idx, std::size_t j) const {
    return best_[(offset_[depth] + idx) * m_ + j];
  }

  void write_row(std::size_t depth, std::size_t c, std::size_t s) {
    const auto d = lat_.dims();
    for (std::size_t i = 0; i < d; ++i) {
      double prev = depth == 0 ? 0.0 : buf_[(depth - 1) * d + i];
      buf_[depth * d + i] = prev + lat_.increment(c, s, i);
    }
  }

  std::span<const double> path() const { return buf_; }

  static constexpr std::size_t kMaxRecordedEntries = std::size_t{1} << 28;

private:
  const VolLattice& lat_;
  const F& x_;
  std::size_t m_;
  std::vector<double> buf_;
  double inv_branch_;
  std::vector<double> scratch_;      // per depth: running sums and child values
  std::vector<std::uint16_t> arg_;  // per depth: running argmax
  std::vector<std::size_t> offset_;
  std::vector<std::uint16_t> best_;
};

}  // namespace detail

/// sup over adapted volatility strategies of E[X(B)] for every payoff of the
/// batch, by one backward induction.
template <PathFunctionalBatch F>
std::vector<double> gexp_batch(const VolLattice& lat, const F& xs) {
  detail::Backward<F> dp(lat, xs);
  return dp.template root<false>();
}

/// sup over adapted volatility strategies of E[X(B)], by backward induction.
template <PathFunctional F>
double gexp(const VolLattice& lat, const F& x) {
  return gexp_batch(lat, SingleFunctional<F>{x}).front();
}

/// Builds the path measure from recorded paths and weights.
inline PathMeasure make_path_measure(const VolLattice& lat, const std::vector<std::vector<double>>& paths,
                                     std::vector<double> weights, std::optional<Strategy> strategy) {
  std::vector<std::string> ids;
  std::vector<Path> embedding;
  ids.reserve(paths.size());
  for (const auto& v : paths) {
    ids.push_back(lat.path_id(v));
    embedding.push_back(Path{lat.steps(), lat.dims(), v});
  }
  auto space = OutcomeSpace::make_paths(std::move(ids), std::move(embedding));
  return PathMeasure{Measure(std::move(space), std::move(weights)), std::move(strategy)};
}

struct GexpSolution {
  double value = 0.0;
  PathMeasure worst;
};

/// G-expectations of a batch together with the strategies attaining them,
/// from a single backward pass. At every node the smallest volatility
/// (lexicographically) among the maximizers is kept. Values are
/// bit-identical to gexp().
template <PathFunctionalBatch F>
std::vector<GexpSolution> solve_gexp_batch(const VolLattice& lat, const F& xs) {
  detail::Backward<F> dp(lat, xs, true);
  auto values = dp.template root<true>();

  const double inv_branch = 1.0 / static_cast<double>(lat.branching());
  const auto n_choices = lat.choices().size();
  std::vector<GexpSolution> out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    Strategy strat{std::vector<std::vector<double>>(lat.internal_nodes())};
    std::vector<std::vector<double>> paths;
    std::vector<double> weights;
    auto descend = [&](auto&& self, std::size_t depth, std::size_t node, std::size_t idx, double w) -> void {
      if (depth == lat.steps()) {
        auto p = dp.path();
        paths.emplace_back(p.begin(), p.end());
        weights.push_back(w);
        return;
      }
      auto c = dp.best_choice(depth, idx, j);
      strat.sigma[node] = lat.choices()[c];
      for (std::size_t s = 0; s < lat.branching(); ++s) {
        dp.write_row(depth, c, s);
        self(self, depth + 1, lat.child(depth, node, s), (idx * n_choices + c) * lat.branching() + s, w * inv_branch);
      }
    };
    descend(descend, 0, 0, 0, 1.0);
    out.push_back({values[j], make_path_measure(lat, paths, std::move(weights), std::move(strat))});
  }
  return out;
}

/// G-expectation together with the strategy measure attaining it.
template <PathFunctional F>
GexpSolution solve_gexp(const VolLattice& lat, const F& x) {
  return std::move(solve_gexp_batch(lat, SingleFunctional<F>{x}).front());
}

/// Strategy measure attaining the G-expectation.
template <PathFunctional F>
PathMeasure worst_measure(const VolLattice& lat, const F& x) {
  return solve_gexp(lat, x).worst;
}

/// Path measure induced by a strategy: every sign combination has probability 2^{-d}.
/// The strategy may use volatilities outside the lattice grid.
inline PathMeasure measure_for(const VolLattice& lat, const Strategy& strat) {
  if (strat.sigma.size() != lat.internal_nodes())
    throw PreconditionError("strategy is not total on the lattice nodes");
  for (const auto& s : strat.sigma)
    if (s.size() != lat.dims()) throw PreconditionError("strategy is not total on the lattice nodes");

  const auto d = lat.dims();
  std::vector<double> buf(lat.steps() * d, 0.0);
  std::vector<std::vector<double>> paths;
  std::vector<double> weights;
  const double w_leaf = std::ldexp(1.0, -static_cast<int>(d * lat.steps()));
  auto walk = [&](auto&& self, std::size_t depth, std::size_t node) -> void {
    if (depth == lat.steps()) {
      paths.push_back(buf);
      weights.push_back(w_leaf);
      return;
    }
    for (std::size_t s = 0; s < lat.branching(); ++s) {
      for (std::size_t i = 0; i < d; ++i) {
        double prev = depth == 0 ? 0.0 : buf[(depth - 1) * d + i];
        buf[depth * d + i] = prev + VolLattice::sign(s, i) * strat.sigma[node][i] * lat.sqrt_dt();
      }
      self(self, depth + 1, lat.child(depth, node, s));
    }
  };
  walk(walk, 0, 0);
  return make_path_measure(lat, paths, std::move(weights), strat);
}

/// Every internal node uses the same volatility vector.
inline Strategy constant_strategy(const VolLattice& lat, const std::vector<double>& sigma) {
  return Strategy{std::vector<std::vector<double>>(lat.internal_nodes(), sigma)};
}

/// Payoff on a path-embedded space obtained by evaluating X on every path.
template <PathFunctional F>
Payoff materialize(const SpacePtr& space, const F& x) {
  if (space->embedding() != EmbeddingKind::Path) throw PreconditionError("space is not path-embedded");
  std::vector<double> v;
  v.reserve(space->size());
  for (const auto& p : space->paths()) v.push_back(x(PathView(p)));
  return Payoff(space, std::move(v));
}

// ---------------------------------------------------------------------------
// Shared spaces, exports and mixtures
// ---------------------------------------------------------------------------

/// Union of the path spaces of several measures, in order of first appearance.
inline SpacePtr union_path_space(std::span<const PathMeasure> pms) {
  std::vector<std::string> ids;
  std::vector<Path> paths;
  std::map<std::string, std::size_t> seen;
  for (const auto& pm : pms) {
    const auto& sp = pm.measure.space();
    if (sp->embedding() != EmbeddingKind::Path) throw PreconditionError("space is not path-embedded");
    for (std::size_t i = 0; i < sp->size(); ++i)
      if (seen.emplace(sp->id(i), ids.size()).second) {
        ids.push_back(sp->id(i));
        paths.push_back(sp->path(i));
      }
  }
  return OutcomeSpace::make_paths(std::move(ids), std::move(paths));
}

/// The same measure expressed on a larger path space.
inline Measure rebase(const Measure& m, const SpacePtr& target) {
  std::vector<double> w(target->size(), 0.0);
  const auto& sp = m.space();
  for (std::size_t i = 0; i < sp->size(); ++i)
    if (m.charges(i)) w[target->index_of(sp->id(i))] += m[i];
  return Measure(target, std::move(w));
}

/// Scenario set (zero penalties) of several path measures on their union space.
inline ScenarioSet export_scenarios(std::span<const PathMeasure> pms) {
  auto space = union_path_space(pms);
  std::vector<Measure> ms;
  for (const auto& pm : pms) ms.push_back(rebase(pm.measure, space));
  return ScenarioSet::sublinear(space, ms);
}

/// Convex combination of path measures; the result has no single strategy.
inline PathMeasure mix_path_measures(std::span<const PathMeasure> pms, std::span<const double> weights) {
  if (pms.size() != weights.size() || pms.empty())
    throw std::invalid_argument("one weight per path measure is required");
  auto space = union_path_space(pms);
  std::vector<MixturePart> parts;
  for (std::size_t j = 0; j < pms.size(); ++j) parts.push_back({weights[j], rebase(pms[j].measure, space)});
  return PathMeasure{mixture(parts, true), std::nullopt};
}

// ---------------------------------------------------------------------------
// Scenario verification
// ---------------------------------------------------------------------------

struct ScenarioCheckReport {
  double martingale_max_violation = 0.0;
  double orthogonality_max_violation = 0.0;
  std::vector<std::size_t> paths;          ///< charged outcome indices
  std::vector<std::vector<double>> qv;     ///< Σₖ (ΔBᵢ)² per charged path and dimension
  std::vector<std::vector<bool>> qv_within;

  bool qv_all_within() const {
    for (const auto& row : qv_within)
      if (std::find(row.begin(), row.end(), false) != row.end()) return false;
    return true;
  }

  bool passed(double tol = kDefaultTol) const {
    return martingale_max_violation <= tol && orthogonality_max_violation <= tol && qv_all_within();
  }
};

/// Checks that the coordinate process is a martingale under the measure,
/// that the two coordinates are orthogonal (d = 2), and that the realized
/// quadratic variation of every charged path lies in [σ̲ᵢ²T, σ̄ᵢ²T].
/// Conditioning is on the observed path prefix, so mixtures of strategy
/// measures are accepted.
inline ScenarioCheckReport verify_scenario(const PathMeasure& pm, const VolLattice& lat) {
  const auto& space = pm.measure.space();
  const auto k_steps = lat.steps();
  const auto d = lat.dims();
  if (space->embedding() != EmbeddingKind::Path) throw PreconditionError("foreign measure: no path embedding");
  for (const auto& p : space->paths())
    if (p.steps != k_steps || p.dims != d) throw PreconditionError("foreign measure: path shape differs");

  if (pm.strategy) {
    const auto& st = *pm.strategy;
    if (st.sigma.size() != lat.internal_nodes())
      throw PreconditionError("foreign measure: strategy not total on lattice nodes");
    for (const auto& s : st.sigma)
      if (s.size() != d) throw PreconditionError("foreign measure: strategy not total on lattice nodes");
    // Charged paths must follow the strategy.
    for (std::size_t j = 0; j < space->size(); ++j) {
      if (!pm.measure.charges(j)) continue;
      PathView v(space->path(j));
      std::size_t node = 0;
      for (std::size_t k = 1; k <= k_steps; ++k) {
        std::size_t code = 0;
        for (std::size_t i = 0; i < d; ++i) {
          double inc = v.increment(k, i);
          double expect = st.sigma[node][i] * lat.sqrt_dt();
          if (std::abs(std::abs(inc) - expect) > 1e-12 * (1.0 + expect))
            throw PreconditionError("foreign measure: path '" + space->id(j) + "' does not follow the strategy");
          if (inc > 0.0) code |= std::size_t{1} << i;
        }
        node = lat.child(k - 1, node, code);
      }
    }
  }

  struct Acc {
    double mass = 0.0;
    double inc[2] = {0.0, 0.0};
    double cross = 0.0;
  };
  std::map<std::vector<double>, Acc> nodes;
  ScenarioCheckReport rep;
  const double t = lat.params().horizon;
  for (std::size_t j = 0; j < space->size(); ++j) {
    double w = pm.measure[j];
    if (!(w > 0.0)) continue;
    PathView v(space->path(j));
    std::vector<double> prefix;
    std::vector<double> qv(d, 0.0);
    for (std::size_t k = 1; k <= k_steps; ++k) {
      auto& acc = nodes[prefix];
      acc.mass += w;
      for (std::size_t i = 0; i < d; ++i) {
        double inc = v.increment(k, i);
        acc.inc[i] += w * inc;
        qv[i] += inc * inc;
      }
      if (d == 2) acc.cross += w * v.increment(k, 0) * v.increment(k, 1);
      for (std::size_t i = 0; i < d; ++i) prefix.push_back(v.at(k, i));
    }
    std::vector<bool> ok(d);
    for (std::size_t i = 0; i < d; ++i) {
      double lo = lat.params().sigma_low[i] * lat.params().sigma_low[i] * t;
      double hi = lat.params().sigma_high[i] * lat.params().sigma_high[i] * t;
      double slack = 1e-12 * hi;
      ok[i] = qv[i] >= lo - slack && qv[i] <= hi + slack;
    }
    rep.paths.push_back(j);
    rep.qv.push_back(std::move(qv));
    rep.qv_within.push_back(std::move(ok));
  }
  for (const auto& [prefix, acc] : nodes) {
    for (std::size_t i = 0; i < d; ++i)
      rep.martingale_max_violation = std::max(rep.martingale_max_violation, std::abs(acc.inc[i] / acc.mass));
    if (d == 2) rep.orthogonality_max_violation = std::max(rep.orthogonality_max_violation, std::abs(acc.cross / acc.mass));
  }
  return rep;
}

}  // namespace ucrisk

#endif  // UCRISK_GEXP_HPP
