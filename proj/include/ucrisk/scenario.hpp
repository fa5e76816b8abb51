#ifndef UCRISK_SCENARIO_HPP
#define UCRISK_SCENARIO_HPP

// Finite outcome spaces, finitely supported measures, payoffs and scenario
// sets. Everything here is immutable after construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ucrisk/error.hpp"

namespace ucrisk {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A discrete path: `steps` rows of `dims` coordinates, row k holding B at time k+1.
struct Path {
  std::size_t steps = 0;
  std::size_t dims = 0;
  std::vector<double> values;  // row-major, steps * dims

  double at(std::size_t step, std::size_t dim) const { return values[step * dims + dim]; }
  bool operator==(const Path&) const = default;
};

enum class EmbeddingKind { None, Real, Path };

class OutcomeSpace;
using SpacePtr = std::shared_ptr<const OutcomeSpace>;

/// Ordered finite universe of outcome identifiers, optionally embedded in
/// the real line or in a space of discrete paths.
class OutcomeSpace {
public:
  static SpacePtr make(std::vector<std::string> ids) {
    return SpacePtr(new OutcomeSpace(std::move(ids), {}, {}, EmbeddingKind::None));
  }

  static SpacePtr make_real(std::vector<std::string> ids, std::vector<double> points) {
    if (points.size() != ids.size())
      throw std::invalid_argument("real embedding must be total");
    for (double x : points)
      if (!std::isfinite(x)) throw std::invalid_argument("embedding point must be finite");
    return SpacePtr(new OutcomeSpace(std::move(ids), std::move(points), {}, EmbeddingKind::Real));
  }

  static SpacePtr make_paths(std::vector<std::string> ids, std::vector<Path> paths) {
    if (paths.size() != ids.size())
      throw std::invalid_argument("path embedding must be total");
    for (const auto& p : paths)
      if (p.values.size() != p.steps * p.dims)
        throw std::invalid_argument("path array has wrong shape");
    return SpacePtr(new OutcomeSpace(std::move(ids), {}, std::move(paths), EmbeddingKind::Path));
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }

  std::optional<std::size_t> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const std::string& id) const {
    auto i = find(id);
    if (!i) throw std::out_of_range("unknown outcome '" + id + "'");
    return *i;
  }

  EmbeddingKind embedding() const noexcept { return kind_; }
  double point(std::size_t i) const { return points_.at(i); }
  const std::vector<double>& points() const noexcept { return points_; }
  const Path& path(std::size_t i) const { return paths_.at(i); }
  const std::vector<Path>& paths() const noexcept { return paths_; }

  bool same_as(const OutcomeSpace& other) const noexcept {
    return this == &other || ids_ == other.ids_;
  }

private:
  OutcomeSpace(std::vector<std::string> ids, std::vector<double> points, std::vector<Path> paths,
               EmbeddingKind kind)
      : ids_(std::move(ids)), points_(std::move(points)), paths_(std::move(paths)), kind_(kind) {
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (!index_.emplace(ids_[i], i).second)
        throw std::invalid_argument("duplicate outcome id '" + ids_[i] + "'");
    }
  }

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> points_;
  std::vector<Path> paths_;
  EmbeddingKind kind_;
};

namespace detail {

inline void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (!a || !b || !a->same_as(*b)) throw SpaceMismatch(what);
}

}  // namespace detail

/// Finitely supported non-negative measure. Weights are stored densely.
class Measure {
public:
  Measure(SpacePtr space, std::vector<double> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (!space_) throw std::invalid_argument("measure needs a space");
    if (weights_.size() != space_->size())
      throw std::invalid_argument("measure weights must match the space size");
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
        throw std::invalid_argument("negative or non-finite weight on '" + space_->id(i) + "'");
    }
  }

  /// Outcomes absent from the map carry weight 0.
  static Measure from_map(SpacePtr space, const std::map<std::string, double>& weights) {
    std::vector<double> w(space->size(), 0.0);
    for (const auto& [id, v] : weights) w[space->index_of(id)] = v;
    return Measure(std::move(space), std::move(w));
  }

  static Measure dirac(SpacePtr space, std::size_t i, double mass = 1.0) {
    std::vector<double> w(space->size(), 0.0);
    w.at(i) = mass;
    return Measure(std::move(space), std::move(w));
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  double mass() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }
  bool is_probability(double tol = kProbabilityTol) const { return std::abs(mass() - 1.0) <= tol; }
  bool charges(std::size_t i) const { return weights_[i] > 0.0; }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (weights_[i] > 0.0) s.push_back(i);
    return s;
  }

private:
  SpacePtr space_;
  std::vector<double> weights_;
};

/// Total real-valued function on an outcome space.
class Payoff {
public:
  Payoff(SpacePtr space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw std::invalid_argument("payoff needs a space");
    if (values_.size() != space_->size())
      throw std::invalid_argument("payoff must be total on its space");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw std::invalid_argument("non-finite payoff value on '" + space_->id(i) + "'");
  }

  /// Every outcome must be present; missing outcomes are an error.
  static Payoff from_map(SpacePtr space, const std::map<std::string, double>& values) {
    std::vector<double> v(space->size(), 0.0);
    std::vector<bool> seen(space->size(), false);
    for (const auto& [id, x] : values) {
      auto i = space->index_of(id);
      v[i] = x;
      seen[i] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw std::invalid_argument("payoff missing outcome '" + space->id(i) + "'");
    return Payoff(std::move(space), std::move(v));
  }

  static Payoff constant(SpacePtr space, double c) {
    auto n = space->size();
    return Payoff(std::move(space), std::vector<double>(n, c));
  }

  static Payoff indicator(SpacePtr space, std::size_t i) {
    std::vector<double> v(space->size(), 0.0);
    v.at(i) = 1.0;
    return Payoff(std::move(space), std::move(v));
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  Payoff abs() const { return map([](double x) { return std::abs(x); }); }

  template <class F>
  Payoff map(F f) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), f);
    return Payoff(space_, std::move(v));
  }

  friend Payoff operator+(const Payoff& a, const Payoff& b) { return a.zip(b, std::plus<>{}); }
  friend Payoff operator-(const Payoff& a, const Payoff& b) { return a.zip(b, std::minus<>{}); }
  friend Payoff operator-(const Payoff& a) { return a.map([](double x) { return -x; }); }
  friend Payoff operator+(const Payoff& a, double c) { return a.map([c](double x) { return x + c; }); }
  friend Payoff operator*(double s, const Payoff& a) { return a.map([s](double x) { return s * x; }); }

private:
  template <class Op>
  Payoff zip(const Payoff& b, Op op) const {
    detail::require_same_space(space_, b.space_, "payoff arithmetic");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(values_[i], b.values_[i]);
    return Payoff(space_, std::move(v));
  }

  SpacePtr space_;
  std::vector<double> values_;
};

/// A probability measure together with its penalty (+inf excludes it from
/// dual maxima).
struct Member {
  Measure measure;
  double penalty = 0.0;

  bool finite() const noexcept { return std::isfinite(penalty); }
};

/// Non-empty ordered family of probability measures on one space.
class ScenarioSet {
public:
  ScenarioSet(SpacePtr space, std::vector<Member> members)
      : space_(std::move(space)), members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("scenario set must be non-empty");
    bool any_finite = false;
    for (std::size_t n = 0; n < members_.size(); ++n) {
      const auto& m = members_[n];
      detail::require_same_space(space_, m.measure.space(), "scenario member");
      if (!m.measure.is_probability())
        throw std::invalid_argument("scenario member " + std::to_string(n) +
                                    " is not a probability measure");
      if (std::isnan(m.penalty) || m.penalty < 0.0)
        throw std::invalid_argument("scenario member " + std::to_string(n) +
                                    " has a negative penalty");
      any_finite = any_finite || m.finite();
    }
    if (!any_finite) throw std::invalid_argument("every penalty is infinite");
  }

  /// All penalties zero.
  static ScenarioSet sublinear(SpacePtr space, const std::vector<Measure>& measures) {
    std::vector<Member> members;
    members.reserve(measures.size());
    for (const auto& q : measures) members.push_back({q, 0.0});
    return ScenarioSet(std::move(space), std::move(members));
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return members_.size(); }
  const Member& operator[](std::size_t n) const { return members_[n]; }
  const std::vector<Member>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  /// Outcomes charged by at least one member (or by one finite-penalty
  /// member when `finite_only` is set).
  std::vector<bool> charged(bool finite_only = false) const {
    std::vector<bool> c(space_->size(), false);
    for (const auto& m : members_) {
      if (finite_only && !m.finite()) continue;
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = c[i] || m.measure.charges(i);
    }
    return c;
  }

  /// Same family restricted to the given member indices, in that order.
  ScenarioSet subset(std::span<const std::size_t> indices) const {
    std::vector<Member> sub;
    for (auto n : indices) sub.push_back(members_.at(n));
    return ScenarioSet(space_, std::move(sub));
  }

  ScenarioSet finite_part() const {
    std::vector<std::size_t> idx;
    for (std::size_t n = 0; n < members_.size(); ++n)
      if (members_[n].finite()) idx.push_back(n);
    return subset(idx);
  }

private:
  SpacePtr space_;
  std::vector<Member> members_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// E_Q(X).
inline double expectation_signed(const Measure& q, const Payoff& x) {
  detail::require_same_space(q.space(), x.space(), "expectation");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += q[i] * x[i];
  return s;
}

/// E_Q(|X|^p)^{1/p}, p >= 1.
inline double expectation(const Measure& q, const Payoff& x, double p = 1.0) {
  detail::require_same_space(q.space(), x.space(), "expectation");
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) s += q[i] * std::abs(x[i]);
    return s;
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    if (q[i] > 0.0) s += q[i] * std::pow(std::abs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

struct MixturePart {
  double weight;
  Measure measure;
};

/// Σ weightₙ·Qₙ. With `require_probability` the weights must sum to 1.
inline Measure mixture(std::span<const MixturePart> parts, bool require_probability = false) {
  if (parts.empty()) throw std::invalid_argument("mixture of an empty sequence");
  const auto& space = parts.front().measure.space();
  std::vector<double> w(space->size(), 0.0);
  double total = 0.0;
  for (const auto& part : parts) {
    if (!(part.weight > 0.0) || !std::isfinite(part.weight))
      throw std::invalid_argument("mixture weights must be positive");
    detail::require_same_space(space, part.measure.space(), "mixture");
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += part.weight * part.measure[i];
    total += part.weight;
  }
  if (require_probability && std::abs(total - 1.0) > kProbabilityTol)
    throw std::invalid_argument("mixture weights must sum to 1");
  return Measure(space, std::move(w));
}

/// X >= 0 on every outcome charged by some member of S.
inline bool is_nonneg(const Payoff& x, const ScenarioSet& s) {
  detail::require_same_space(x.space(), s.space(), "is_nonneg");
  auto charged = s.charged();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (charged[i] && x[i] < 0.0) return false;
  return true;
}

/// Throws NotInDualCone when `mu` charges an outcome no member charges.
inline void require_dominated(const Measure& mu, const ScenarioSet& s, const std::string& name) {
  detail::require_same_space(mu.space(), s.space(), "dominance");
  auto charged = s.charged();
  for (std::size_t i = 0; i < charged.size(); ++i)
    if (mu.charges(i) && !charged[i]) throw NotInDualCone(name, s.space()->id(i));
}

/// K with |μ(f)| <= K·c_p(f) for every payoff f: Σ μ(ω)/maxₙ Qₙ(ω).
inline double dominance_constant(const Measure& mu, const ScenarioSet& s) {
  require_dominated(mu, s, "measure");
  double k = 0.0;
  for (std::size_t i = 0; i < mu.space()->size(); ++i) {
    if (!mu.charges(i)) continue;
    double w = 0.0;
    for (const auto& m : s) w = std::max(w, m.measure[i]);
    k += mu[i] / w;
  }
  return k;
}

/// Two dominated measures are equivalent when they have the same null
/// non-negative payoffs, which on a finite space means the same support.
/// The exponent does not change the null sets of c_p; it is accepted for
/// interface symmetry with the capacity routines.
inline bool capacity_equivalent(const Measure& mu, const Measure& nu, const ScenarioSet& s,
                                double p = 1.0) {
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  require_dominated(mu, s, "first measure");
  require_dominated(nu, s, "second measure");
  for (std::size_t i = 0; i < mu.space()->size(); ++i)
    if (mu.charges(i) != nu.charges(i)) return false;
  return true;
}

}  // namespace ucrisk

#endif  // UCRISK_SCENARIO_HPP
