#ifndef UCRISK_CAPACITY_HPP
#define UCRISK_CAPACITY_HPP

// The capacity seminorm c_p(X) = sup_Q E_Q(|X|^p)^{1/p} over a scenario set,
// capacities of open and closed sets via monotone continuous approximation,
// epsilon-net reduction of scenario sets, canonical reference measures and
// the Dirac family on which c_p(1_A) and sup_Q Q(A) disagree.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ucrisk/scenario.hpp"

namespace ucrisk {

struct CapacityResult {
  double value = 0.0;
  std::size_t index = 0;  ///< first member attaining the maximum
};

/// Exact maximum of E_Q(|X|^p)^{1/p} over the members; ties go to the lowest index.
inline CapacityResult capacity_argmax(const Payoff& x, const ScenarioSet& s, double p = 1.0) {
  detail::require_same_space(x.space(), s.space(), "capacity");
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  CapacityResult best{-1.0, 0};
  for (std::size_t n = 0; n < s.size(); ++n) {
    double v = expectation(s[n].measure, x, p);
    if (v > best.value) best = {v, n};
  }
  return best;
}

inline double capacity(const Payoff& x, const ScenarioSet& s, double p = 1.0) {
  return capacity_argmax(x, s, p).value;
}

// ---------------------------------------------------------------------------
// Indicator capacities of open and closed subsets of the real line
// ---------------------------------------------------------------------------

enum class SetKind { Open, Closed };

struct Interval {
  double lo;
  double hi;
};

/// Finite union of disjoint ordered intervals, all open or all closed,
/// optionally with a strictly decreasing sequence of atoms removed (open kind only).
struct SetDescriptor {
  SetKind kind = SetKind::Open;
  std::vector<Interval> intervals;
  std::vector<double> removed_atoms;

  void validate() const {
    for (std::size_t j = 0; j < intervals.size(); ++j) {
      const auto& iv = intervals[j];
      if (!(iv.lo <= iv.hi) || (kind == SetKind::Open && iv.lo == iv.hi))
        throw std::invalid_argument("malformed interval");
      if (j > 0) {
        const auto& prev = intervals[j - 1];
        bool overlap = kind == SetKind::Open ? iv.lo < prev.hi : iv.lo <= prev.hi;
        if (overlap) throw std::invalid_argument("intervals must be disjoint and ordered");
      }
    }
    if (!removed_atoms.empty() && kind == SetKind::Closed)
      throw std::invalid_argument("removing atoms from a closed set does not keep it closed");
    for (std::size_t j = 1; j < removed_atoms.size(); ++j)
      if (!(removed_atoms[j] < removed_atoms[j - 1]))
        throw std::invalid_argument("removed atoms must be strictly decreasing");
  }

  bool contains(double x) const {
    bool in = false;
    for (const auto& iv : intervals) {
      in = kind == SetKind::Open ? (iv.lo < x && x < iv.hi) : (iv.lo <= x && x <= iv.hi);
      if (in) break;
    }
    if (!in) return false;
    return std::find(removed_atoms.begin(), removed_atoms.end(), x) == removed_atoms.end();
  }

  bool in_interior(double x) const {
    for (const auto& iv : intervals)
      if (iv.lo < x && x < iv.hi)
        return std::find(removed_atoms.begin(), removed_atoms.end(), x) == removed_atoms.end();
    return false;
  }

  bool on_boundary(double x) const {
    for (const auto& iv : intervals)
      if (x == iv.lo || x == iv.hi) return true;
    return std::find(removed_atoms.begin(), removed_atoms.end(), x) != removed_atoms.end();
  }

  /// Distance from x to the set (closed kind) or to its complement (open kind, x inside).
  double distance(double x) const {
    double d = kInfinity;
    if (kind == SetKind::Closed) {
      for (const auto& iv : intervals) {
        double dj = x < iv.lo ? iv.lo - x : (x > iv.hi ? x - iv.hi : 0.0);
        d = std::min(d, dj);
      }
      return d;
    }
    if (!contains(x)) return 0.0;
    for (const auto& iv : intervals)
      if (iv.lo < x && x < iv.hi) d = std::min(x - iv.lo, iv.hi - x);
    for (double a : removed_atoms) d = std::min(d, std::abs(x - a));
    return d;
  }
};

struct IndicatorCapacity {
  double value = 0.0;               ///< sup_Q Q(D)^{1/p}
  double monotone_limit = 0.0;      ///< c(h_n) or c(g_n) at the stabilization step
  std::uint64_t stabilization_step = 1;
  bool stabilized = true;
  double interior_value = 0.0;      ///< sup_Q Q(int D)^{1/p}
  std::vector<std::size_t> boundary_atoms;
  std::optional<std::string> warning;
};

namespace detail {

inline std::uint64_t steps_to_reach(double dist) {
  if (!(dist > 0.0)) return 1;
  double n = std::ceil(1.0 / dist);
  while (n * dist < 1.0) n += 1.0;
  return static_cast<std::uint64_t>(std::max(1.0, n));
}

}  // namespace detail

/// c_p(1_D) for an open or closed real set D. For open D the increasing
/// approximants are h_n(x) = min(1, n·dist(x, Dᶜ)); for closed D the
/// decreasing ones are g_n(x) = max(0, 1 - n·dist(x, D)). Both are evaluated
/// at the step where every charged atom has reached its limit.
inline IndicatorCapacity indicator_capacity(const SetDescriptor& d, const ScenarioSet& s,
                                            double p = 1.0, double tol = kDefaultTol) {
  if (s.space()->embedding() != EmbeddingKind::Real)
    throw PreconditionError("indicator capacity needs outcomes embedded in the real line");
  d.validate();
  const auto& space = s.space();
  const auto n_out = space->size();
  auto charged = s.charged();

  std::vector<double> ind(n_out), interior(n_out);
  IndicatorCapacity out;
  std::uint64_t n_star = 1;
  for (std::size_t i = 0; i < n_out; ++i) {
    double x = space->point(i);
    ind[i] = d.contains(x) ? 1.0 : 0.0;
    interior[i] = d.in_interior(x) ? 1.0 : 0.0;
    if (!charged[i]) continue;
    if (d.kind == SetKind::Open && ind[i] > 0.0)
      n_star = std::max(n_star, detail::steps_to_reach(d.distance(x)));
    if (d.kind == SetKind::Closed) {
      if (ind[i] == 0.0) n_star = std::max(n_star, detail::steps_to_reach(d.distance(x)));
      else if (d.on_boundary(x)) out.boundary_atoms.push_back(i);
    }
  }

  std::vector<double> approx(n_out);
  const double n = static_cast<double>(n_star);
  for (std::size_t i = 0; i < n_out; ++i) {
    double x = space->point(i);
    approx[i] = d.kind == SetKind::Open ? std::min(1.0, n * d.distance(x))
                                        : std::max(0.0, 1.0 - n * d.distance(x));
  }

  out.value = capacity(Payoff(space, ind), s, p);
  out.monotone_limit = capacity(Payoff(space, approx), s, p);
  out.interior_value = capacity(Payoff(space, interior), s, p);
  out.stabilization_step = n_star;
  out.stabilized = std::abs(out.value - out.monotone_limit) <= tol;
  if (!out.boundary_atoms.empty()) {
    out.stabilized = false;
    out.warning = "boundary atom: " + std::to_string(out.boundary_atoms.size()) +
                  " charged atom(s) on the boundary of the closed set; indicator value " +
                  std::to_string(out.value) + ", monotone limit " +
                  std::to_string(out.monotone_limit) + ", interior value " +
                  std::to_string(out.interior_value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dirac family Q_n = δ_{x_n}, x_n = 1/(n+1), A = [0,1] minus the atoms
// ---------------------------------------------------------------------------

struct CounterexampleReport {
  double eta = 0.0;
  double p = 1.0;
  std::size_t atoms = 0;
  std::size_t family_size = 0;
  double capacity_lower_bound = 0.0;  ///< inf over majorants f >= 1_A of sup_n f(x_n)
  double sup_measure_of_A = 0.0;      ///< sup_n Q_n(A)^{1/p}
  std::size_t witness_index = 0;      ///< 1-based atom certifying f(x_n) > 1 - eta
  bool certified = false;             ///< every majorant has such a witness
};

enum class MajorantFamily { Full, ConstantOnly };

struct CounterexampleOptions {
  double p = 1.0;
  MajorantFamily family = MajorantFamily::Full;
  std::size_t random_members = 64;
  std::uint64_t seed = 20240501;
};

/// Lower semi-continuous majorant of 1_A taking the value 1 - depth at
/// finitely many atoms and 1 everywhere else on [0,1].
struct DipMajorant {
  std::vector<std::pair<std::size_t, double>> dips;  ///< (1-based atom index, depth in [0,1])
};

inline double atom_location(std::size_t n) { return 1.0 / static_cast<double>(n + 1); }

inline CounterexampleReport dirac_counterexample(double eta, std::size_t n_atoms,
                                                 const CounterexampleOptions& opt = {}) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
  if (n_atoms < 2) throw std::invalid_argument("need at least two atoms");
  if (!(opt.p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");

  std::vector<std::string> ids;
  std::vector<double> xs;
  std::vector<Measure> diracs;
  for (std::size_t n = 1; n <= n_atoms; ++n) {
    ids.push_back("x" + std::to_string(n));
    xs.push_back(atom_location(n));
  }
  auto space = OutcomeSpace::make_real(ids, xs);
  for (std::size_t i = 0; i < n_atoms; ++i) diracs.push_back(Measure::dirac(space, i));
  auto family_set = ScenarioSet::sublinear(space, diracs);

  // A restricted to the outcome space; [0,1] is covered by a wider open interval.
  SetDescriptor a{SetKind::Open, {{-0.5, 1.5}}, xs};
  std::vector<double> ind(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) ind[i] = a.contains(xs[i]) ? 1.0 : 0.0;

  CounterexampleReport rep;
  rep.eta = eta;
  rep.p = opt.p;
  rep.atoms = n_atoms;
  rep.sup_measure_of_A = capacity(Payoff(space, ind), family_set, opt.p);

  std::vector<DipMajorant> family;
  family.push_back({});
  if (opt.family == MajorantFamily::Full) {
    // Only the first n_atoms - 1 atoms may be dipped: a finitely described
    // majorant leaves a tail of the sequence untouched.
    for (std::size_t m = 1; m < n_atoms; ++m) {
      DipMajorant f;
      for (std::size_t j = 1; j <= m; ++j) f.dips.emplace_back(j, 1.0);
      family.push_back(std::move(f));
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(1, n_atoms - 1);
    std::uniform_real_distribution<double> depth(0.0, 1.0);
    for (std::size_t r = 0; r < opt.random_members; ++r) {
      DipMajorant f;
      std::size_t k = pick(rng);
      for (std::size_t j = 0; j < k; ++j) f.dips.emplace_back(pick(rng), depth(rng));
      family.push_back(std::move(f));
    }
  }
  rep.family_size = family.size();

  rep.capacity_lower_bound = kInfinity;
  rep.certified = true;
  std::vector<double> f_at(n_atoms);
  for (const auto& f : family) {
    std::fill(f_at.begin(), f_at.end(), 1.0);
    for (auto [j, dep] : f.dips) f_at[j - 1] = std::min(f_at[j - 1], 1.0 - dep);
    for (std::size_t i = 0; i < n_atoms; ++i)
      if (ind[i] > f_at[i]) throw std::logic_error("family member is not a majorant of 1_A");

    // {f > 1 - eta} is open and contains 0, so it contains [0, eps) with eps
    // the leftmost point where f <= 1 - eta.
    double eps = 1.0;
    for (std::size_t i = 0; i < n_atoms; ++i)
      if (f_at[i] <= 1.0 - eta) eps = std::min(eps, xs[i]);
    std::size_t witness = 0;
    for (std::size_t i = 0; i < n_atoms && witness == 0; ++i)
      if (xs[i] < eps && f_at[i] > 1.0 - eta) witness = i + 1;
    if (witness == 0) rep.certified = false;

    double sup = capacity(Payoff(space, f_at), family_set, opt.p);
    if (sup < rep.capacity_lower_bound) {
      rep.capacity_lower_bound = sup;
      rep.witness_index = witness;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Scenario reduction
// ---------------------------------------------------------------------------

/// Finite bank of test payoffs standing in for a dense family of continuous functions.
class TestBank {
public:
  explicit TestBank(std::vector<Payoff> payoffs) : payoffs_(std::move(payoffs)) {
    if (payoffs_.empty()) throw std::invalid_argument("test bank is empty");
    bool nonconstant = false;
    for (const auto& f : payoffs_) {
      detail::require_same_space(payoffs_.front().space(), f.space(), "test bank");
      auto v = f.values();
      nonconstant = nonconstant || std::any_of(v.begin(), v.end(), [&](double y) { return y != v[0]; });
    }
    if (!nonconstant) throw std::invalid_argument("test bank needs a non-constant payoff");
  }

  static TestBank indicators(const SpacePtr& space) {
    std::vector<Payoff> fs;
    for (std::size_t i = 0; i < space->size(); ++i) fs.push_back(Payoff::indicator(space, i));
    return TestBank(std::move(fs));
  }

  /// x, x², ..., x^degree on a real-embedded space.
  static TestBank monomials(const SpacePtr& space, int degree) {
    if (space->embedding() != EmbeddingKind::Real)
      throw PreconditionError("monomial bank needs a real embedding");
    std::vector<Payoff> fs;
    for (int k = 1; k <= degree; ++k) {
      std::vector<double> v;
      for (double x : space->points()) v.push_back(std::pow(x, k));
      fs.emplace_back(space, std::move(v));
    }
    return TestBank(std::move(fs));
  }

  const std::vector<Payoff>& payoffs() const noexcept { return payoffs_; }
  std::size_t size() const noexcept { return payoffs_.size(); }
  const SpacePtr& space() const noexcept { return payoffs_.front().space(); }

private:
  std::vector<Payoff> payoffs_;
};

struct ReductionResult {
  std::vector<std::size_t> indices;  ///< ascending member indices
  double achieved_error = 0.0;       ///< covering radius of the net
  std::size_t bank_size = 0;
};

/// Pseudo-distance between two members: the largest gap in E f or E|f| over the bank.
inline double bank_distance(const Measure& q, const Measure& r, const TestBank& bank) {
  double d = 0.0;
  for (const auto& f : bank.payoffs()) {
    d = std::max(d, std::abs(expectation_signed(q, f) - expectation_signed(r, f)));
    d = std::max(d, std::abs(expectation(q, f, 1.0) - expectation(r, f, 1.0)));
  }
  return d;
}

/// Greedy farthest-point epsilon-net of the members under bank_distance.
/// Starts from member 0; ties go to the lowest index.
inline ReductionResult reduce(const ScenarioSet& s, const TestBank& bank, double eps) {
  detail::require_same_space(s.space(), bank.space(), "reduce");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");

  const auto m = s.size();
  // Feature vectors: (E f, E|f|) for every bank payoff.
  std::vector<std::vector<double>> feat(m);
  for (std::size_t n = 0; n < m; ++n) {
    for (const auto& f : bank.payoffs()) {
      feat[n].push_back(expectation_signed(s[n].measure, f));
      feat[n].push_back(expectation(s[n].measure, f, 1.0));
    }
  }
  auto dist = [&](std::size_t a, std::size_t b) {
    double d = 0.0;
    for (std::size_t k = 0; k < feat[a].size(); ++k) d = std::max(d, std::abs(feat[a][k] - feat[b][k]));
    return d;
  };

  std::vector<std::size_t> centers{0};
  std::vector<double> to_net(m);
  for (std::size_t n = 0; n < m; ++n) to_net[n] = dist(n, 0);
  while (true) {
    std::size_t far = 0;
    for (std::size_t n = 1; n < m; ++n)
      if (to_net[n] > to_net[far]) far = n;
    if (to_net[far] <= eps) break;
    centers.push_back(far);
    for (std::size_t n = 0; n < m; ++n) to_net[n] = std::min(to_net[n], dist(n, far));
  }

  ReductionResult r;
  r.indices = centers;
  std::sort(r.indices.begin(), r.indices.end());
  r.achieved_error = *std::max_element(to_net.begin(), to_net.end());
  r.bank_size = bank.size();
  return r;
}

// ---------------------------------------------------------------------------
// Canonical reference measure
// ---------------------------------------------------------------------------

/// 2^{-(n+1)} for n = 1..m-1 with the remaining mass on the last member.
inline std::vector<double> geometric_weights(std::size_t m) {
  std::vector<double> w(m);
  double used = 0.0;
  for (std::size_t n = 0; n + 1 < m; ++n) {
    w[n] = std::ldexp(1.0, -static_cast<int>(n + 2));
    used += w[n];
  }
  w[m - 1] = 1.0 - used;
  return w;
}

/// For non-negative X: E_P(X) = 0 iff c(X) = 0, checked on every payoff given.
inline bool null_sets_agree(const Measure& p, const ScenarioSet& s, std::span<const Payoff> payoffs,
                            double tol = kDefaultTol) {
  for (const auto& x : payoffs) {
    bool p_null = std::abs(expectation(p, x, 1.0)) <= tol;
    bool c_null = capacity(x, s, 1.0) <= tol;
    if (p_null != c_null) return false;
  }
  return true;
}

/// P = Σ αₙQₙ with strictly positive weights summing to one. With `verify`,
/// the null-set characterization is checked on every outcome indicator.
inline Measure canonical_measure(const ScenarioSet& s,
                                 std::optional<std::vector<double>> weights = std::nullopt,
                                 bool verify = false) {
  std::vector<double> w = weights ? *weights : geometric_weights(s.size());
  if (w.size() != s.size()) throw std::invalid_argument("weight count differs from member count");
  double total = 0.0;
  for (double a : w) {
    if (!(a > 0.0)) throw std::invalid_argument("canonical weights must be strictly positive");
    total += a;
  }
  if (std::abs(total - 1.0) > kProbabilityTol)
    throw std::invalid_argument("canonical weights must sum to 1");

  std::vector<MixturePart> parts;
  for (std::size_t n = 0; n < s.size(); ++n) parts.push_back({w[n], s[n].measure});
  Measure p = mixture(parts);

  if (verify) {
    std::vector<Payoff> ind;
    for (std::size_t i = 0; i < s.space()->size(); ++i) ind.push_back(Payoff::indicator(s.space(), i));
    if (!null_sets_agree(p, s, ind)) throw std::logic_error("canonical measure fails the null-set check");
  }
  return p;
}

}  // namespace ucrisk

#endif  // UCRISK_CAPACITY_HPP
