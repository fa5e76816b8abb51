#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "ucrisk/capacity.hpp"
#include "ucrisk/gexp.hpp"

using namespace ucrisk;

namespace {

VolLattice lattice(std::size_t k, std::size_t d, double lo = 0.1, double hi = 0.3, double t = 1.0) {
  return build_lattice(LatticeParams::uniform(k, t, d, lo, hi));
}

double b1_squared(const PathView& p) { return p.terminal(0) * p.terminal(0); }

double expect_under(const PathMeasure& pm, const auto& x) {
  return expectation_signed(pm.measure, materialize(pm.measure.space(), x));
}

}  // namespace

TEST(Lattice, Counts) {
  auto one = lattice(1, 1);
  EXPECT_EQ(one.terminal_paths(), 2u);
  EXPECT_EQ(one.strategy_count(), std::optional<std::uint64_t>(2));
  EXPECT_EQ(lattice(2, 1).strategy_count(), std::optional<std::uint64_t>(8));
  EXPECT_EQ(lattice(1, 2).terminal_paths(), 4u);
  EXPECT_EQ(lattice(1, 2).choices().size(), 4u);
  EXPECT_FALSE(lattice(12, 1).strategy_count().has_value());
}

TEST(Lattice, Errors) {
  EXPECT_THROW(lattice(13, 2), std::length_error);
  EXPECT_THROW(lattice(25, 1), std::length_error);
  EXPECT_THROW(lattice(0, 1), std::invalid_argument);
  EXPECT_THROW(lattice(2, 3), std::invalid_argument);
  EXPECT_THROW(lattice(2, 1, 0.3, 0.1), std::invalid_argument);
  auto p = LatticeParams::uniform(2, 1.0, 1, 0.1, 0.3);
  p.sigma_grid[0] = {0.1, 0.2};
  EXPECT_THROW(build_lattice(p), std::invalid_argument);
}

TEST(Gexp, Examples) {
  auto lat = lattice(1, 1);
  EXPECT_NEAR(gexp(lat, b1_squared), 0.09, 1e-15);
  EXPECT_NEAR(gexp(lat, [](const PathView& p) { return -b1_squared(p); }), -0.01, 1e-15);
  EXPECT_EQ(gexp(lat, [](const PathView& p) { return p.terminal(0); }), 0.0);
}

TEST(WorstMeasure, Examples) {
  auto lat = lattice(1, 1);
  auto pm = worst_measure(lat, b1_squared);
  ASSERT_TRUE(pm.strategy.has_value());
  EXPECT_EQ(pm.strategy->sigma[0], std::vector<double>{0.3});
  EXPECT_EQ(pm.measure.space()->size(), 2u);
  EXPECT_EQ(pm.measure[0], 0.5);
  EXPECT_EQ(pm.measure[1], 0.5);

  auto lat3 = lattice(3, 1);
  auto flat = worst_measure(lat3, [](const PathView&) { return 2.5; });
  for (const auto& s : flat.strategy->sigma) EXPECT_EQ(s, std::vector<double>{0.1});
  auto concave = worst_measure(lat3, [](const PathView& p) { return -b1_squared(p); });
  for (const auto& s : concave.strategy->sigma) EXPECT_EQ(s, std::vector<double>{0.1});
}

TEST(WorstMeasure, AttainsGexpAndPassesChecks) {
  std::mt19937_64 rng(5);
  for (auto [k, d] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 1}, {5, 1}, {1, 2}, {2, 2}, {3, 2}}) {
    auto lat = lattice(k, d);
    for (int t = 0; t < 5; ++t) {
      auto f = oracle::RandomPathPayoff::draw(rng);
      auto sol = solve_gexp(lat, f);
      EXPECT_EQ(sol.value, gexp(lat, f));
      EXPECT_NEAR(expect_under(sol.worst, f), sol.value, 1e-12);
      auto rep = verify_scenario(sol.worst, lat);
      EXPECT_LE(rep.martingale_max_violation, 1e-12);
      EXPECT_LE(rep.orthogonality_max_violation, 1e-12);
      EXPECT_TRUE(rep.qv_all_within());
      EXPECT_EQ(rep.paths.size(), lat.terminal_paths());
    }
  }
}

TEST(Gexp, BatchIsBitIdenticalToScalar) {
  std::mt19937_64 rng(6);
  oracle::RandomPathBook book;
  for (int j = 0; j < 7; ++j) book.payoffs.push_back(oracle::RandomPathPayoff::draw(rng));
  for (auto [k, d] : {std::pair<std::size_t, std::size_t>{4, 1}, {2, 2}}) {
    auto lat = lattice(k, d);
    auto vals = gexp_batch(lat, book);
    auto sols = solve_gexp_batch(lat, book);
    for (std::size_t j = 0; j < book.size(); ++j) {
      EXPECT_EQ(vals[j], gexp(lat, book.payoffs[j]));
      EXPECT_EQ(sols[j].value, vals[j]);
      auto single = worst_measure(lat, book.payoffs[j]);
      EXPECT_EQ(single.strategy->sigma, sols[j].worst.strategy->sigma);
    }
  }
}

TEST(Gexp, EqualsBruteForceOnSmallLattices) {
  std::mt19937_64 rng(7);
  for (auto [k, d] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 1}, {3, 1}, {1, 2}, {2, 2}}) {
    auto lat = lattice(k, d, 0.15, 0.4, 0.5);
    for (int t = 0; t < 5; ++t) {
      auto f = oracle::RandomPathPayoff::draw(rng);
      auto brute = oracle::brute_force_gexp(lat, f);
      ASSERT_TRUE(brute.has_value());
      EXPECT_NEAR(gexp(lat, f), *brute, 1e-12);
    }
  }
}

TEST(Gexp, ThreePointGrid) {
  auto p = LatticeParams::uniform(2, 1.0, 1, 0.1, 0.3);
  p.sigma_grid[0] = {0.1, 0.2, 0.3};
  auto lat = build_lattice(p);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    auto f = oracle::RandomPathPayoff::draw(rng);
    auto brute = oracle::brute_force_gexp(lat, f);
    ASSERT_TRUE(brute.has_value());
    EXPECT_NEAR(gexp(lat, f), *brute, 1e-12);
  }
}

TEST(Gexp, Sublinear) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  auto lat = lattice(4, 1);
  for (int t = 0; t < 20; ++t) {
    auto f = oracle::RandomPathPayoff::draw(rng);
    auto g = oracle::RandomPathPayoff::draw(rng);
    double lam = u(rng), a = u(rng) - 1.5;
    double ef = gexp(lat, f), eg = gexp(lat, g);
    EXPECT_LE(gexp(lat, [&](const PathView& p) { return f(p) + g(p); }), ef + eg + 1e-12);
    EXPECT_NEAR(gexp(lat, [&](const PathView& p) { return lam * f(p); }), lam * ef, 1e-12);
    EXPECT_NEAR(gexp(lat, [&](const PathView& p) { return f(p) + a; }), ef + a, 1e-12);
  }
}

TEST(Gexp, ConvexAndConcaveCollapse) {
  for (std::size_t d : {1u, 2u}) {
    auto lat = lattice(3, d);
    auto hi = lattice(3, d, 0.3, 0.3);
    auto lo = lattice(3, d, 0.1, 0.1);
    auto convex = [d](const PathView& p) {
      double v = std::exp(0.5 * p.terminal(0)) + std::max(p.terminal(0) - 0.05, 0.0);
      if (d == 2) v += (p.terminal(0) + p.terminal(1)) * (p.terminal(0) + p.terminal(1));
      return v;
    };
    auto concave = [&](const PathView& p) { return -convex(p); };
    EXPECT_NEAR(gexp(lat, convex), gexp(hi, convex), 1e-12);
    EXPECT_NEAR(gexp(lat, concave), gexp(lo, concave), 1e-12);
    std::vector<double> top(d, 0.3);
    EXPECT_NEAR(gexp(lat, convex), oracle::strategy_expectation(lat, constant_strategy(lat, top), convex), 1e-12);
  }
}

TEST(Gexp, CapacityBridge) {
  std::mt19937_64 rng(10);
  auto lat = lattice(3, 1);
  std::vector<oracle::RandomPathPayoff> bank;
  std::vector<PathMeasure> worst;
  for (int j = 0; j < 4; ++j) {
    bank.push_back(oracle::RandomPathPayoff::draw(rng));
    auto f = bank.back();
    worst.push_back(worst_measure(lat, [f](const PathView& p) { return std::abs(f(p)); }));
  }
  auto set = export_scenarios(worst);
  for (const auto& f : bank) {
    double c = capacity(materialize(set.space(), f), set, 1.0);
    double e = gexp(lat, [f](const PathView& p) { return std::abs(f(p)); });
    EXPECT_NEAR(c, e, 1e-12);
  }
  auto other = oracle::RandomPathPayoff::draw(rng);
  EXPECT_LE(capacity(materialize(set.space(), other), set, 1.0),
            gexp(lat, [other](const PathView& p) { return std::abs(other(p)); }) + 1e-12);
}

TEST(VerifyScenario, MixturesPass) {
  std::mt19937_64 rng(11);
  for (std::size_t d : {1u, 2u}) {
    auto lat = lattice(2, d);
    std::vector<PathMeasure> pms;
    for (int j = 0; j < 3; ++j) pms.push_back(measure_for(lat, oracle::random_strategy(lat, rng)));
    std::vector<double> w{0.2, 0.5, 0.3};
    auto mix = mix_path_measures(pms, w);
    EXPECT_FALSE(mix.strategy.has_value());
    auto rep = verify_scenario(mix, lat);
    EXPECT_TRUE(rep.passed(1e-12));
  }
}

TEST(VerifyScenario, TiltedSignIsDetected) {
  auto lat = lattice(2, 1);
  auto base = measure_for(lat, constant_strategy(lat, {0.3}));
  const auto& sp = base.measure.space();
  std::vector<double> w(sp->size());
  for (std::size_t i = 0; i < sp->size(); ++i) w[i] = base.measure[i] * (sp->path(i).at(0, 0) > 0 ? 1.2 : 0.8);
  PathMeasure tilted{Measure(sp, w), base.strategy};
  auto rep = verify_scenario(tilted, lat);
  EXPECT_NEAR(rep.martingale_max_violation, 0.2 * 0.3 * lat.sqrt_dt(), 1e-15);
  EXPECT_TRUE(rep.qv_all_within());
  EXPECT_FALSE(rep.passed());
}

TEST(VerifyScenario, VolatilityOutsideBoundsIsFlagged) {
  auto lat = lattice(2, 2);
  auto pm = measure_for(lat, constant_strategy(lat, {0.5, 0.2}));
  auto rep = verify_scenario(pm, lat);
  EXPECT_LE(rep.martingale_max_violation, 1e-12);
  EXPECT_FALSE(rep.qv_all_within());
  for (const auto& row : rep.qv_within) {
    EXPECT_FALSE(row[0]);
    EXPECT_TRUE(row[1]);
  }
}

TEST(VerifyScenario, ForeignMeasuresAreRejected) {
  auto lat = lattice(2, 1);
  auto other = measure_for(lattice(3, 1), constant_strategy(lattice(3, 1), {0.1}));
  EXPECT_THROW(verify_scenario(other, lat), PreconditionError);

  auto pm = measure_for(lat, constant_strategy(lat, {0.1}));
  pm.strategy->sigma.pop_back();
  EXPECT_THROW(verify_scenario(pm, lat), PreconditionError);

  auto s = OutcomeSpace::make({"a"});
  EXPECT_THROW(verify_scenario(PathMeasure{Measure::dirac(s, 0), std::nullopt}, lat), PreconditionError);

  Strategy partial{std::vector<std::vector<double>>(lat.internal_nodes() - 1, {0.1})};
  EXPECT_THROW(measure_for(lat, partial), PreconditionError);
}

TEST(PathIds, AreReadable) {
  auto lat = lattice(2, 1);
  auto pm = measure_for(lat, constant_strategy(lat, {0.3}));
  EXPECT_EQ(pm.measure.space()->id(0), "-0.3|-0.3");
  EXPECT_EQ(pm.measure.space()->id(3), "+0.3|+0.3");
}
