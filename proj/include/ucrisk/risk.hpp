#ifndef UCRISK_RISK_HPP
#define UCRISK_RISK_HPP

// Convex risk measures in dual form ρ(X) = maxₙ (E_{Qₙ}(-X) - αₙ) over a
// finite scenario set, together with minimal penalties by conjugation,
// attaining scenarios, the minimal sublinear majorant ρ_min, the capacity
// c_ρ(X) = ρ_min(-|X|), riskless payoffs, and an axiom checker for
// arbitrary functionals.

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ucrisk/capacity.hpp"
#include "ucrisk/lp.hpp"
#include "ucrisk/scenario.hpp"

namespace ucrisk {

/// Scenario set with penalties. When `normalized` is set the smallest
/// finite penalty must be zero, which is equivalent to ρ(0) = 0.
class RiskSpec {
public:
  explicit RiskSpec(ScenarioSet scenarios, bool normalized = true)
      : scenarios_(std::move(scenarios)), normalized_(normalized) {
    if (normalized_ && min_penalty() > kDefaultTol)
      throw std::invalid_argument("normalized risk spec needs a member with zero penalty");
  }

  const ScenarioSet& scenarios() const noexcept { return scenarios_; }
  const SpacePtr& space() const noexcept { return scenarios_.space(); }
  bool normalized() const noexcept { return normalized_; }
  std::size_t size() const noexcept { return scenarios_.size(); }

  double min_penalty() const {
    double m = kInfinity;
    for (const auto& q : scenarios_) m = std::min(m, q.penalty);
    return m;
  }

private:
  ScenarioSet scenarios_;
  bool normalized_;
};

struct Maximizer {
  std::size_t index = 0;
  double value = 0.0;  ///< E_Q(-X) - α(Q)
};

/// Attaining member of the dual representation; ties go to the lowest index.
inline Maximizer maximizer(const RiskSpec& spec, const Payoff& x) {
  detail::require_same_space(spec.space(), x.space(), "rho");
  const auto& s = spec.scenarios();
  std::optional<Maximizer> best;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (!s[n].finite()) continue;
    double v = -expectation_signed(s[n].measure, x) - s[n].penalty;
    if (!best || v > best->value) best = Maximizer{n, v};
  }
  if (!best) throw std::invalid_argument("every penalty is infinite");
  return *best;
}

inline double rho(const RiskSpec& spec, const Payoff& x) { return maximizer(spec, x).value; }

// ---------------------------------------------------------------------------
// Minimal penalty by conjugation
// ---------------------------------------------------------------------------

enum class PenaltyMethod { Auto, Enumeration, Simplex };

struct PenaltyValue {
  double value = kInfinity;
  std::vector<double> lambda;  ///< weights over all members (0 for excluded ones)

  bool finite() const noexcept { return std::isfinite(value); }
};

/// Largest member count solved by basis enumeration under PenaltyMethod::Auto.
inline constexpr std::size_t kEnumerationLimit = 12;

/// α(Q) = sup_X (E_Q(-X) - ρ(X)). On a finite space this is the linear
/// program  min Σ λₙαₙ  over λ in the simplex with Σ λₙQₙ = Q, and +∞ when Q
/// lies outside the convex hull of the finite-penalty members.
inline PenaltyValue penalty(const RiskSpec& spec, const Measure& q,
                            PenaltyMethod method = PenaltyMethod::Auto) {
  detail::require_same_space(spec.space(), q.space(), "penalty");
  if (!q.is_probability()) throw std::invalid_argument("penalty is defined for probability measures");

  const auto& s = spec.scenarios();
  std::vector<std::size_t> cols;
  for (std::size_t n = 0; n < s.size(); ++n)
    if (s[n].finite()) cols.push_back(n);

  const auto n_out = static_cast<Eigen::Index>(spec.space()->size());
  const auto m = static_cast<Eigen::Index>(cols.size());
  lp::Problem pr{Eigen::MatrixXd::Zero(n_out + 1, m), Eigen::VectorXd::Zero(n_out + 1),
                 Eigen::VectorXd::Zero(m)};
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& member = s[cols[static_cast<std::size_t>(j)]];
    for (Eigen::Index i = 0; i < n_out; ++i) pr.a(i, j) = member.measure[static_cast<std::size_t>(i)];
    pr.a(n_out, j) = 1.0;
    pr.c(j) = member.penalty;
  }
  for (Eigen::Index i = 0; i < n_out; ++i) pr.b(i) = q[static_cast<std::size_t>(i)];
  pr.b(n_out) = 1.0;

  if (method == PenaltyMethod::Auto)
    method = cols.size() <= kEnumerationLimit ? PenaltyMethod::Enumeration : PenaltyMethod::Simplex;
  auto sol = method == PenaltyMethod::Enumeration ? lp::solve_by_enumeration(pr) : lp::solve_by_simplex(pr);

  PenaltyValue out;
  out.lambda.assign(s.size(), 0.0);
  if (!sol) return out;
  out.value = std::max(0.0, sol->value);
  for (Eigen::Index j = 0; j < m; ++j) out.lambda[cols[static_cast<std::size_t>(j)]] = sol->x(j);
  return out;
}

/// Same members with every finite penalty replaced by the minimal one.
inline RiskSpec with_minimal_penalties(const RiskSpec& spec, PenaltyMethod method = PenaltyMethod::Auto) {
  std::vector<Member> members;
  for (const auto& q : spec.scenarios()) {
    double a = q.finite() ? penalty(spec, q.measure, method).value : kInfinity;
    members.push_back({q.measure, a});
  }
  return RiskSpec(ScenarioSet(spec.space(), std::move(members)), spec.normalized());
}

// ---------------------------------------------------------------------------
// ρ_min and the canonical capacity
// ---------------------------------------------------------------------------

inline void require_normalized(const RiskSpec& spec) {
  if (!spec.normalized()) throw PreconditionError("risk spec is not normalized");
}

/// sup_{λ>0} ρ(λX)/λ = max over finite-penalty members of E_Q(-X).
inline double rho_min(const RiskSpec& spec, const Payoff& x) {
  require_normalized(spec);
  detail::require_same_space(spec.space(), x.space(), "rho_min");
  double best = -kInfinity;
  for (const auto& q : spec.scenarios())
    if (q.finite()) best = std::max(best, -expectation_signed(q.measure, x));
  return best;
}

/// λ = 2^k for k = -10..20.
inline std::vector<double> lambda_grid() {
  std::vector<double> g;
  for (int k = -10; k <= 20; ++k) g.push_back(std::ldexp(1.0, k));
  return g;
}

struct RhoMinDiagnostic {
  double closed_form = 0.0;
  std::vector<double> lambdas;
  std::vector<double> ratios;  ///< ρ(λX)/λ
  bool monotone = true;        ///< ratios nondecreasing in λ
  bool converges = true;       ///< last ratio within the penalty/λ gap of the closed form
};

inline RhoMinDiagnostic rho_min_diagnostic(const RiskSpec& spec, const Payoff& x, double tol = 1e-10) {
  RhoMinDiagnostic d;
  d.closed_form = rho_min(spec, x);
  d.lambdas = lambda_grid();
  double max_alpha = 0.0;
  for (const auto& q : spec.scenarios())
    if (q.finite()) max_alpha = std::max(max_alpha, q.penalty);
  for (double lam : d.lambdas) {
    double r = rho(spec, lam * x) / lam;
    if (!d.ratios.empty() && r < d.ratios.back() - tol) d.monotone = false;
    if (r > d.closed_form + tol) d.converges = false;
    d.ratios.push_back(r);
  }
  double gap = d.closed_form - d.ratios.back();
  d.converges = d.converges && gap <= max_alpha / d.lambdas.back() + tol;
  return d;
}

/// c_ρ(X) = ρ_min(-|X|) = max over finite-penalty members of E_Q|X|.
inline double canonical_capacity(const RiskSpec& spec, const Payoff& x) {
  return rho_min(spec, -x.abs());
}

/// P/2 + Σₙ Qₙ/2^{n+2} over the finite-penalty members, with P the canonical
/// measure of those members and the leftover mass on the last one. Every
/// member is absolutely continuous with respect to the result.
inline Measure dominating_reference(const RiskSpec& spec) {
  auto fin = spec.scenarios().finite_part();
  Measure p = canonical_measure(fin);
  std::vector<MixturePart> parts{{0.5, p}};
  double used = 0.5;
  for (std::size_t n = 0; n < fin.size(); ++n) {
    double w = n + 1 < fin.size() ? std::ldexp(1.0, -static_cast<int>(n + 2)) : 1.0 - used;
    parts.push_back({w, fin[n].measure});
    used += w;
  }
  return mixture(parts, true);
}

// ---------------------------------------------------------------------------
// Riskless payoffs
// ---------------------------------------------------------------------------

struct RisklessResult {
  bool riskless = true;
  double lambda = 0.0;       ///< witness scale with ρ(λX) > 0 when not riskless
  std::size_t member = 0;    ///< attaining member at the witness scale
  double rho_at_lambda = 0.0;
};

/// A payoff X <= 0 is riskless when ρ(λX) = 0 for every λ > 0, which holds
/// iff E_Q(X) = 0 for every finite-penalty member. Some statements of this
/// characterization say "non negative"; the sign convention here is X <= 0.
inline RisklessResult riskless(const RiskSpec& spec, const Payoff& x, double tol = kDefaultTol) {
  require_normalized(spec);
  detail::require_same_space(spec.space(), x.space(), "riskless");
  auto charged = spec.scenarios().charged(true);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (charged[i] && x[i] > 0.0)
      throw PreconditionError("payoff is positive on charged outcome '" + x.space()->id(i) + "'");

  RisklessResult out;
  for (const auto& q : spec.scenarios())
    if (q.finite() && std::abs(expectation_signed(q.measure, x)) > tol) out.riskless = false;
  if (out.riskless) return out;

  auto record = [&](double lam) {
    auto mx = maximizer(spec, lam * x);
    if (mx.value <= tol) return false;
    out.lambda = lam;
    out.member = mx.index;
    out.rho_at_lambda = mx.value;
    return true;
  };
  for (double lam : lambda_grid())
    if (record(lam)) return out;

  // Penalties too large for the grid: λ = 2αₙ/E_{Qₙ}(-X) for the cheapest member.
  double best_scale = kInfinity;
  for (const auto& q : spec.scenarios()) {
    if (!q.finite()) continue;
    double e = -expectation_signed(q.measure, x);
    if (e > tol) best_scale = std::min(best_scale, q.penalty > 0.0 ? 2.0 * q.penalty / e : 1.0);
  }
  if (!record(best_scale)) throw std::logic_error("no witness scale found for a risky payoff");
  return out;
}

// ---------------------------------------------------------------------------
// Entropic risk measure
// ---------------------------------------------------------------------------

/// (1/θ)·ln E_P[exp(-θX)].
inline double entropic_oracle(const Measure& p, double theta, const Payoff& x) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  detail::require_same_space(p.space(), x.space(), "entropic");
  if (!p.is_probability()) throw std::invalid_argument("reference measure must be a probability");
  double top = -kInfinity;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (p.charges(i)) top = std::max(top, -theta * x[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (p.charges(i)) s += p[i] * std::exp(-theta * x[i] - top);
  return (top + std::log(s)) / theta;
}

/// H(Q|P) = Σ Q log(Q/P); +∞ unless Q << P.
inline double relative_entropy(const Measure& q, const Measure& p) {
  detail::require_same_space(q.space(), p.space(), "relative entropy");
  double h = 0.0;
  for (std::size_t i = 0; i < q.space()->size(); ++i) {
    if (!q.charges(i)) continue;
    if (!p.charges(i)) return kInfinity;
    h += q[i] * std::log(q[i] / p[i]);
  }
  return std::max(0.0, h);
}

/// All compositions of `resolution` into `parts` non-negative integers, scaled by 1/resolution.
inline std::vector<std::vector<double>> simplex_grid(std::size_t parts, std::size_t resolution) {
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> k(parts, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
    if (pos + 1 == parts) {
      k[pos] = left;
      std::vector<double> pt(parts);
      for (std::size_t j = 0; j < parts; ++j) pt[j] = static_cast<double>(k[j]) / static_cast<double>(resolution);
      out.push_back(std::move(pt));
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      k[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  if (parts > 0) rec(0, resolution);
  return out;
}

/// Dual approximation of the entropic measure: simplex-grid measures on the
/// support of P with penalties H(Q|P)/θ. Its ρ never exceeds the closed form.
inline RiskSpec entropic_spec(const Measure& p, double theta, std::size_t resolution) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (resolution == 0) throw std::invalid_argument("grid resolution must be positive");
  auto supp = p.support();
  std::vector<Member> members;
  for (const auto& pt : simplex_grid(supp.size(), resolution)) {
    std::vector<double> w(p.space()->size(), 0.0);
    for (std::size_t j = 0; j < supp.size(); ++j) w[supp[j]] = pt[j];
    Measure q(p.space(), std::move(w));
    double a = relative_entropy(q, p) / theta;
    members.push_back({std::move(q), a});
  }
  return RiskSpec(ScenarioSet(p.space(), std::move(members)), false);
}

// ---------------------------------------------------------------------------
// Axiom checking for arbitrary functionals
// ---------------------------------------------------------------------------

using RiskFunctional = std::function<double(const Payoff&)>;

/// A functional threw while being evaluated on `input`.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& what, std::vector<double> input)
      : std::runtime_error(what), input_(std::move(input)) {}
  const std::vector<double>& input() const noexcept { return input_; }

private:
  std::vector<double> input_;
};

struct AxiomWitness {
  std::vector<double> x;
  std::vector<double> y;
  double scalar = 0.0;  ///< λ for convexity, shift a for translation
};

struct AxiomVerdict {
  std::string axiom;
  bool checked = true;
  bool passed = true;
  double max_violation = 0.0;
  std::optional<AxiomWitness> witness;
};

struct AxiomReport {
  std::vector<AxiomVerdict> verdicts;
  std::size_t trials = 0;
  double tol = 0.0;

  bool all_passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.passed; });
  }

  const AxiomVerdict& at(const std::string& name) const {
    for (const auto& v : verdicts)
      if (v.axiom == name) return v;
    throw std::out_of_range("unknown axiom '" + name + "'");
  }
};

struct AxiomOptions {
  std::uint64_t seed = 7;
  double scale = 5.0;                 ///< payoff values drawn from [-scale, scale]
  std::optional<RiskFunctional> capacity;  ///< enables the Lipschitz check
};

inline const char* const kMonotonicity = "monotonicity";
inline const char* const kTranslation = "translation_invariance";
inline const char* const kConvexity = "convexity";
inline const char* const kNormalization = "normalization";
inline const char* const kLipschitz = "lipschitz";

/// Randomized and corner-case search for violations of monotonicity
/// (X <= Y ⇒ ρ(X) >= ρ(Y)), translation invariance, convexity,
/// normalization and |ρ(X) - ρ(Y)| <= c(X - Y).
inline AxiomReport verify_axioms(const RiskFunctional& rho_like, const SpacePtr& space, std::size_t trials,
                                 double tol, const AxiomOptions& opt = {}) {
  const auto n = space->size();
  auto eval = [&](const RiskFunctional& f, const std::vector<double>& v) {
    try {
      return f(Payoff(space, v));
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "functional failed on (";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
      os << "): " << e.what();
      throw EvaluationError(os.str(), v);
    }
  };

  AxiomReport rep;
  rep.trials = trials;
  rep.tol = tol;
  for (const char* name : {kMonotonicity, kTranslation, kConvexity, kNormalization, kLipschitz}) {
    AxiomVerdict v;
    v.axiom = name;
    rep.verdicts.push_back(std::move(v));
  }
  rep.verdicts[4].checked = opt.capacity.has_value();

  auto note = [&](std::size_t k, double violation, AxiomWitness w) {
    auto& v = rep.verdicts[k];
    if (violation > v.max_violation) v.max_violation = violation;
    if (violation > tol && v.passed) {
      v.passed = false;
      v.witness = std::move(w);
    }
  };

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-opt.scale, opt.scale);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> small(-2, 2);
  std::uniform_int_distribution<std::size_t> coord(0, n - 1);

  const std::vector<double> zero(n, 0.0);
  note(3, std::abs(eval(rho_like, zero)), {zero, zero, 0.0});

  auto draw = [&](std::size_t t) {
    std::vector<double> v(n);
    switch (t % 4) {
      case 0: for (auto& e : v) e = unif(rng); break;
      case 1: for (auto& e : v) e = small(rng); break;
      case 2: std::fill(v.begin(), v.end(), unif(rng)); break;
      default: v = zero; v[coord(rng)] = unif(rng); break;
    }
    return v;
  };

  for (std::size_t t = 0; t < trials; ++t) {
    auto x = draw(t);
    auto y = draw(t / 4 + 1);
    double rx = eval(rho_like, x), ry = eval(rho_like, y);

    // Y' = X + U with U >= 0, dense or on one coordinate.
    std::vector<double> up = x;
    if (t % 2 == 0) {
      for (auto& e : up) e += opt.scale * unit(rng);
    } else {
      up[coord(rng)] += opt.scale * unit(rng);
    }
    note(0, eval(rho_like, up) - rx, {x, up, 0.0});

    double a = unif(rng);
    std::vector<double> shifted = x;
    for (auto& e : shifted) e += a;
    note(1, std::abs(eval(rho_like, shifted) - (rx - a)), {x, shifted, a});

    double lam = unit(rng);
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = lam * x[i] + (1.0 - lam) * y[i];
    note(2, eval(rho_like, mix) - (lam * rx + (1.0 - lam) * ry), {x, y, lam});

    if (opt.capacity) {
      std::vector<double> diff(n);
      for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - y[i];
      note(4, std::abs(rx - ry) - eval(*opt.capacity, diff), {x, y, 0.0});
      note(4, std::abs(eval(rho_like, shifted) - rx) - eval(*opt.capacity, std::vector<double>(n, a)),
           {shifted, x, a});
    }
  }
  return rep;
}

}  // namespace ucrisk

#endif  // UCRISK_RISK_HPP
