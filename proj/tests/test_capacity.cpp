#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "ucrisk/capacity.hpp"

using namespace ucrisk;

namespace {

SpacePtr ab() { return OutcomeSpace::make({"a", "b"}); }

ScenarioSet diracs(const SpacePtr& s) {
  std::vector<Measure> ms;
  for (std::size_t i = 0; i < s->size(); ++i) ms.push_back(Measure::dirac(s, i));
  return ScenarioSet::sublinear(s, ms);
}

ScenarioSet random_set(std::mt19937_64& rng, std::size_t outcomes, std::size_t members) {
  auto s = oracle::letters(outcomes);
  std::vector<Measure> ms;
  for (std::size_t n = 0; n < members; ++n) ms.push_back(oracle::random_probability(s, rng, true));
  return ScenarioSet::sublinear(s, ms);
}

/// Binomial(trials, theta) law on the points 0, 1/trials, ..., 1.
Measure binomial(const SpacePtr& s, int trials, double theta) {
  std::vector<double> w(static_cast<std::size_t>(trials) + 1);
  for (int k = 0; k <= trials; ++k)
    w[static_cast<std::size_t>(k)] = std::exp(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0)) *
                                     std::pow(theta, k) * std::pow(1.0 - theta, trials - k);
  double t = 0.0;
  for (double v : w) t += v;
  for (double& v : w) v /= t;
  return Measure(s, w);
}

}  // namespace

TEST(Capacity, Examples) {
  auto s = ab();
  EXPECT_DOUBLE_EQ(capacity(Payoff(s, {4, 0}), diracs(s), 1.0), 4.0);
  auto half = ScenarioSet::sublinear(s, {Measure(s, {0.5, 0.5})});
  EXPECT_DOUBLE_EQ(capacity(Payoff(s, {0, 2}), half, 2.0), std::sqrt(2.0));
  for (double p : {1.0, 2.0, 3.5}) EXPECT_NEAR(capacity(Payoff::constant(s, -3.0), half, p), 3.0, 1e-12);
}

TEST(Capacity, Errors) {
  auto s = ab();
  EXPECT_THROW(capacity(Payoff::constant(OutcomeSpace::make({"z"}), 1.0), diracs(s)), SpaceMismatch);
  EXPECT_THROW(capacity(Payoff::constant(s, 1.0), diracs(s), 0.9), std::invalid_argument);
}

TEST(Capacity, ArgmaxPrefersLowestIndex) {
  auto s = ab();
  auto set = ScenarioSet::sublinear(s, {Measure(s, {0.5, 0.5}), Measure(s, {0.5, 0.5}), Measure::dirac(s, 1)});
  auto r = capacity_argmax(Payoff(s, {1, 1}), set);
  EXPECT_EQ(r.index, 0u);
  EXPECT_EQ(capacity_argmax(Payoff(s, {0, 1}), set).index, 2u);
}

TEST(Capacity, SeminormAxioms) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lam(-4.0, 4.0);
  for (int t = 0; t < 300; ++t) {
    auto set = random_set(rng, 6, 4);
    auto x = oracle::random_payoff(set.space(), rng);
    auto y = oracle::random_payoff(set.space(), rng);
    for (double p : {1.0, 2.0, 4.0}) {
      double l = lam(rng);
      double cx = capacity(x, set, p), cy = capacity(y, set, p);
      EXPECT_NEAR(capacity(l * x, set, p), std::abs(l) * cx, 1e-12 * (1.0 + std::abs(l) * cx));
      EXPECT_LE(capacity(x + y, set, p), cx + cy + 1e-12);
      for (const auto& m : set) EXPECT_LE(expectation(m.measure, x, p), cx);
    }
  }
}

TEST(Capacity, RegularAlongDecreasingSequences) {
  std::mt19937_64 rng(2);
  auto set = random_set(rng, 5, 3);
  auto x = oracle::random_nonneg_payoff(set.space(), rng);
  double prev = capacity(x, set);
  for (int n = 1; n <= 60; ++n) {
    double c = capacity(std::pow(0.5, n) * x, set);
    EXPECT_LE(c, prev);
    prev = c;
  }
  EXPECT_LT(prev, 1e-15);
}

TEST(IndicatorCapacity, Examples) {
  auto one = OutcomeSpace::make_real({"m"}, {0.5});
  auto s1 = diracs(one);
  auto open = indicator_capacity({SetKind::Open, {{0.0, 1.0}}, {}}, s1);
  EXPECT_DOUBLE_EQ(open.value, 1.0);
  EXPECT_TRUE(open.stabilized);
  EXPECT_DOUBLE_EQ(open.monotone_limit, 1.0);

  auto closed = indicator_capacity({SetKind::Closed, {{0.25, 0.25}}, {}}, s1);
  EXPECT_DOUBLE_EQ(closed.value, 0.0);
  EXPECT_DOUBLE_EQ(closed.monotone_limit, 0.0);
  EXPECT_TRUE(closed.stabilized);
  EXPECT_GE(closed.stabilization_step, 4u);

  auto two = OutcomeSpace::make_real({"u", "v"}, {0.5, 0.1});
  auto r = indicator_capacity({SetKind::Open, {{0.0, 0.4}}, {}}, diracs(two));
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_TRUE(r.stabilized);
}

TEST(IndicatorCapacity, BoundaryAtomOfClosedSetIsReported) {
  auto s = OutcomeSpace::make_real({"u", "v"}, {0.25, 0.7});
  auto set = ScenarioSet::sublinear(s, {Measure(s, {0.5, 0.5})});
  auto r = indicator_capacity({SetKind::Closed, {{0.25, 0.5}}, {}}, set);
  EXPECT_FALSE(r.stabilized);
  ASSERT_TRUE(r.warning.has_value());
  EXPECT_NE(r.warning->find("boundary atom"), std::string::npos);
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  EXPECT_DOUBLE_EQ(r.monotone_limit, 0.5);
  EXPECT_DOUBLE_EQ(r.interior_value, 0.0);
}

TEST(IndicatorCapacity, Errors) {
  auto plain = ab();
  EXPECT_THROW(indicator_capacity({SetKind::Open, {{0.0, 1.0}}, {}}, diracs(plain)), PreconditionError);
  auto s = OutcomeSpace::make_real({"u"}, {0.5});
  EXPECT_THROW(indicator_capacity({SetKind::Open, {{0.0, 0.6}, {0.5, 0.9}}, {}}, diracs(s)), std::invalid_argument);
  EXPECT_THROW(indicator_capacity({SetKind::Closed, {{0.0, 1.0}}, {0.5}}, diracs(s)), std::invalid_argument);
}

TEST(IndicatorCapacity, OpenSetsMatchAtomMass) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::string> ids;
    std::vector<double> pts;
    for (int i = 0; i < 6; ++i) {
      ids.push_back("w" + std::to_string(i));
      pts.push_back(u(rng));
    }
    auto s = OutcomeSpace::make_real(ids, pts);
    std::vector<Measure> ms;
    for (int n = 0; n < 3; ++n) ms.push_back(oracle::random_probability(s, rng, true));
    auto set = ScenarioSet::sublinear(s, ms);
    double lo = 0.5 * u(rng), hi = 0.5 + 0.5 * u(rng);
    for (double p : {1.0, 2.0}) {
      auto r = indicator_capacity({SetKind::Open, {{lo, hi}}, {}}, set, p);
      double want = 0.0;
      for (const auto& m : set) {
        double mass = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
          if (lo < pts[i] && pts[i] < hi) mass += m.measure[i];
        want = std::max(want, std::pow(mass, 1.0 / p));
      }
      EXPECT_NEAR(r.value, want, 1e-12);
      EXPECT_TRUE(r.stabilized);
    }
  }
}

TEST(Counterexample, Examples) {
  auto r = dirac_counterexample(0.1, 50);
  EXPECT_EQ(r.sup_measure_of_A, 0.0);
  EXPECT_GE(r.capacity_lower_bound, 0.9);
  EXPECT_TRUE(r.certified);
  EXPECT_GE(r.witness_index, 1u);

  auto tight = dirac_counterexample(0.01, 500);
  EXPECT_GE(tight.capacity_lower_bound, 0.99);

  CounterexampleOptions only_one;
  only_one.family = MajorantFamily::ConstantOnly;
  auto c = dirac_counterexample(0.1, 20, only_one);
  EXPECT_EQ(c.capacity_lower_bound, 1.0);
  EXPECT_EQ(c.family_size, 1u);
}

TEST(Counterexample, HoldsForEveryExponent) {
  for (double p : {1.0, 2.0, 5.0}) {
    CounterexampleOptions o;
    o.p = p;
    auto r = dirac_counterexample(0.05, 100, o);
    EXPECT_EQ(r.sup_measure_of_A, 0.0);
    EXPECT_GE(r.capacity_lower_bound, 0.95);
  }
  EXPECT_THROW(dirac_counterexample(1.0, 10), std::invalid_argument);
  EXPECT_THROW(dirac_counterexample(0.1, 1), std::invalid_argument);
}

TEST(Reduce, DuplicatesCollapse) {
  std::mt19937_64 rng(4);
  auto s = oracle::letters(5);
  std::vector<Measure> base;
  for (int n = 0; n < 4; ++n) base.push_back(oracle::random_probability(s, rng, false));
  std::vector<Measure> ms;
  for (int k = 0; k < 3; ++k)
    for (const auto& q : base) ms.push_back(q);
  auto set = ScenarioSet::sublinear(s, ms);
  auto r = reduce(set, TestBank::indicators(s), 1e-9);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(r.achieved_error, 0.0);
}

TEST(Reduce, LargeEpsKeepsOneMember) {
  std::mt19937_64 rng(6);
  auto set = random_set(rng, 5, 10);
  auto r = reduce(set, TestBank::indicators(set.space()), 10.0);
  EXPECT_EQ(r.indices, std::vector<std::size_t>{0});
}

TEST(Reduce, BinomialFamily) {
  std::vector<std::string> ids;
  std::vector<double> pts;
  for (int k = 0; k <= 10; ++k) {
    ids.push_back("k" + std::to_string(k));
    pts.push_back(k / 10.0);
  }
  auto s = OutcomeSpace::make_real(ids, pts);
  std::vector<Measure> ms;
  for (int n = 0; n < 100; ++n) ms.push_back(binomial(s, 10, (n + 0.5) / 100.0));
  auto set = ScenarioSet::sublinear(s, ms);
  auto bank = TestBank::monomials(s, 4);
  auto r = reduce(set, bank, 0.05);
  EXPECT_LE(r.achieved_error, 0.05);
  EXPECT_LT(r.indices.size(), 100u);
  auto sub = set.subset(r.indices);
  for (const auto& f : bank.payoffs()) EXPECT_LE(capacity(f, set) - capacity(f, sub), 0.05);
}

TEST(Reduce, Errors) {
  auto s = ab();
  EXPECT_THROW(TestBank({}), std::invalid_argument);
  EXPECT_THROW(TestBank({Payoff::constant(s, 1.0)}), std::invalid_argument);
  EXPECT_THROW(reduce(diracs(s), TestBank::indicators(s), 0.0), std::invalid_argument);
  EXPECT_THROW(TestBank::monomials(s, 2), PreconditionError);
}

TEST(Canonical, Examples) {
  auto s = ab();
  auto p = canonical_measure(diracs(s), std::vector<double>{0.5, 0.5}, true);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  Payoff x(s, {0, 1});
  EXPECT_GT(expectation(p, x), 0.0);
  EXPECT_GT(capacity(x, diracs(s)), 0.0);

  auto only_a = ScenarioSet::sublinear(s, {Measure::dirac(s, 0)});
  auto pa = canonical_measure(only_a);
  Payoff y(s, {0, 7});
  EXPECT_EQ(expectation(pa, y), 0.0);
  EXPECT_EQ(capacity(y, only_a), 0.0);

  EXPECT_EQ(geometric_weights(3), (std::vector<double>{0.25, 0.125, 0.625}));
  EXPECT_EQ(geometric_weights(1), std::vector<double>{1.0});
}

TEST(Canonical, Errors) {
  auto s = ab();
  EXPECT_THROW(canonical_measure(diracs(s), std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(canonical_measure(diracs(s), std::vector<double>{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(canonical_measure(diracs(s), std::vector<double>{0.6, 0.6}), std::invalid_argument);
}

TEST(Canonical, NullSetsAgreeOnRandomSets) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    auto set = random_set(rng, 7, 1 + t % 6);
    auto p = canonical_measure(set, std::nullopt, true);
    EXPECT_TRUE(p.is_probability());
    std::vector<Payoff> xs;
    for (int k = 0; k < 20; ++k) xs.push_back(oracle::random_nonneg_payoff(set.space(), rng));
    EXPECT_TRUE(null_sets_agree(p, set, xs));
  }
}
