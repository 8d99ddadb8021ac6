#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "dagbandit/errors.hpp"
#include "dagbandit/harness.hpp"
#include "dagbandit/lambert.hpp"
#include "dagbandit/theory.hpp"

namespace dagbandit {
namespace {

ValueMap benchmark_values(const Domain& domain) {
  const SyntheticScores scores = benchmark_scores();
  return compute_values(domain, [&](const StateKey& s) { return sigmoid_mean(scores, s); });
}

double benchmark_tau_ub(const Domain& domain) {
  const ValueMap values = benchmark_values(domain);
  const Gaps g = gaps(domain, values);
  return tau_ub_thm1(h_eps(g, 0.0), g.leaves.size(), 0.1);
}

// w in [-20, -1] with w e^w = y; w e^w decreases from -1/e toward 0 as w falls.
double bisect_wm1(double y) {
  double lo = -20.0;
  double hi = -1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TEST(Gaps, TwoLeafDomain) {
  ExplicitDag g(3, {{0, 1}, {0, 2}});
  std::map<StateKey, double> mean{{ExplicitDag::key(1), 0.7}, {ExplicitDag::key(2), 0.5}};
  const ValueMap values = compute_values(g, [&](const StateKey& s) { return mean.at(s); });
  const Gaps out = gaps(g, values);
  ASSERT_TRUE(out.delta_star.has_value());
  EXPECT_NEAR(*out.delta_star, 0.2, 1e-15);
  ASSERT_EQ(out.leaves.size(), 2u);
}

TEST(Gaps, AllChildrenTieLeavesDeltaStarUndefined) {
  ExplicitDag g(3, {{0, 1}, {0, 2}});
  const ValueMap values = compute_values(g, [](const StateKey&) { return 0.5; });
  EXPECT_FALSE(gaps(g, values).delta_star.has_value());
}

TEST(Gaps, BenchmarkDeltaStarMatchesSigmoidDifference) {
  FixedDepthLattice lattice(6, 3);
  const Gaps out = gaps(lattice, benchmark_values(lattice));
  ASSERT_TRUE(out.delta_star.has_value());
  // Best child {f6}: 0.5+0.4+0.3; runner-up {f3}: 0.5+0.4+0.03.
  const double oracle = 1 / (1 + std::exp(-1.2)) - 1 / (1 + std::exp(-0.93));
  EXPECT_NEAR(*out.delta_star, oracle, 1e-15);
}

TEST(Gaps, BenchmarkDeltaStarIsFiveHundredths) {
  FixedDepthLattice lattice(6, 3);
  const Gaps out = gaps(lattice, benchmark_values(lattice));
  ASSERT_TRUE(out.delta_star.has_value());
  EXPECT_DOUBLE_EQ(*out.delta_star, 0.05);
}

TEST(Gaps, FlatChainContributesZero) {
  ExplicitDag g(4, {{0, 1}, {1, 2}, {2, 3}});
  const ValueMap values = compute_values(g, [](const StateKey&) { return 0.4; });
  const Gaps out = gaps(g, values);
  ASSERT_EQ(out.leaves.size(), 1u);
  EXPECT_EQ(out.leaves[0].gap, 0.0);
}

TEST(HEps, SingleLeaf) {
  Gaps g;
  g.delta_star = 0.5;
  g.leaves.push_back({ExplicitDag::key(1), 0.0});
  EXPECT_DOUBLE_EQ(h_eps(g, 0.0), 4.0);
  EXPECT_DOUBLE_EQ(h_eps(g, 1.0), 1.0);
}

TEST(HEps, ZeroDenominatorIsInputError) {
  Gaps g;
  g.leaves.push_back({ExplicitDag::key(1), 0.0});
  EXPECT_THROW(h_eps(g, 0.0), InputError);
}

TEST(TauUb, UnitLogarithm) {
  EXPECT_NEAR(tau_ub_thm1(1.0, 1, 1.0 / std::numbers::e), 8.0, 1e-12);
}

TEST(TauUb, BenchmarkLattice) {
  EXPECT_NEAR(benchmark_tau_ub(FixedDepthLattice(6, 3)), 96520.0, 1.0);
}

TEST(TauUb, BenchmarkTree) {
  EXPECT_NEAR(benchmark_tau_ub(FixedDepthTree(6, 3)), 498521.0, 1.0);
}

TEST(TauUb, SecondTermGuardsDoubleLog) {
  Gaps g;
  g.delta_star = 0.9;
  g.leaves.push_back({ExplicitDag::key(1), 0.0});
  EXPECT_FALSE(thm1_second_term(g, 0.0).has_value());
  g.delta_star = 0.01;
  const double d2 = 1e-4;
  EXPECT_NEAR(*thm1_second_term(g, 0.0), 16 / d2 * std::log(std::log(1 / d2)), 1e-6);
}

TEST(Lambert, BranchPoint) {
  EXPECT_NEAR(lambert_wm1(-1.0 / std::numbers::e), -1.0, 1e-7);
}

TEST(Lambert, MatchesBisection) {
  const double w = lambert_wm1(-0.05);
  EXPECT_NEAR(w, bisect_wm1(-0.05), 1e-10);
  EXPECT_NEAR(w, -4.4998, 1e-4);
}

TEST(Lambert, ResidualOnGrid) {
  for (int i = 0; i <= 2000; ++i) {
    const double u = std::pow(10.0, -8.0 + 10.8 * i / 2000);
    const double y = -std::exp(-1.0 - u);
    const double w = lambert_wm1(y);
    EXPECT_LE(w, -1.0);
    EXPECT_LE(std::abs(w * std::exp(w) - y), 1e-12 * std::abs(y)) << y;
  }
  for (double y : {-0.3, -0.1, -1e-3, -1e-8, -1e-30, -1e-200}) {
    const double w = lambert_wm1(y);
    EXPECT_LE(std::abs(w * std::exp(w) - y), 1e-12 * std::abs(y)) << y;
  }
}

TEST(Lambert, RejectsOutsideDomain) {
  EXPECT_THROW(lambert_wm1(0.0), InputError);
  EXPECT_THROW(lambert_wm1(-0.4), InputError);
  EXPECT_THROW(lambert_wm1(0.2), InputError);
}

TEST(Lambert, ChatzigeorgiouInequality) {
  for (int i = 0; i <= 500; ++i) {
    const double u = std::pow(10.0, -3.0 + 5.0 * i / 500);
    EXPECT_LE(lambert_wm1(-std::exp(-u - 1)), chatzigeorgiou_bound(u)) << u;
  }
}

TEST(TauMax, Deterministic) {
  const auto a = tau_max_thm2(0.1, 0.05, 0.35);
  const auto b = tau_max_thm2(0.1, 0.05, 0.35);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->exact, b->exact);
  EXPECT_EQ(a->closed_form, b->closed_form);
}

TEST(TauMax, SolvesFixedPointEquation) {
  for (double b : {0.2, 0.3, 0.5, 0.7}) {
    const auto t = tau_max_thm2(0.1, 0.05, b);
    ASSERT_TRUE(t);
    const double tau = t->exact;
    const double lhs = 0.05 * 0.05 * tau;
    const double rhs = 8 * std::pow(tau, b) * std::log(std::pow(tau, b) / 0.1);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-9) << b;
  }
}

TEST(TauMax, InapplicableOutsideRange) {
  EXPECT_FALSE(tau_max_thm2(0.1, 0.05, 0.0));
  EXPECT_FALSE(tau_max_thm2(0.1, 0.05, 1.0));
  EXPECT_FALSE(tau_max_thm2(0.99, 1.0, 0.1));
  EXPECT_TRUE(tau_max_thm2(0.1, 0.9, 0.95));
}

TEST(TauMax, ClosedFormDominatesExact) {
  for (double delta : {0.01, 0.05, 0.1}) {
    for (double gap : {0.01, 0.05, 0.2}) {
      for (int i = 1; i <= 9; ++i) {
        const double b = 0.1 * i;
        const auto t = tau_max_thm2(delta, gap, b);
        if (!t || !(t->u > 0)) continue;
        EXPECT_GE(t->closed_form, t->exact) << delta << ' ' << gap << ' ' << b;
      }
    }
  }
}

TEST(TauMax, DecreasingInB) {
  double prev = INFINITY;
  for (int i = 1; i <= 99; ++i) {
    const auto t = tau_max_thm2(0.1, 0.05, 0.01 * i);
    if (!t) continue;
    EXPECT_LT(t->exact, prev) << 0.01 * i;
    prev = t->exact;
  }
}

// Brute force: every leaf's gap is the max over explicit root-to-leaf paths
// of the largest edge step on the path.
std::map<StateKey, double> gaps_by_path_enumeration(const Domain& domain, const ValueMap& values) {
  std::map<StateKey, double> out;
  std::function<void(const StateKey&, double)> walk = [&](const StateKey& s, double path_max) {
    const auto kids = domain.children(s);
    if (kids.empty()) {
      auto [it, fresh] = out.try_emplace(s, path_max);
      if (!fresh) it->second = std::max(it->second, path_max);
      return;
    }
    for (const auto& c : kids) walk(c, std::max(path_max, std::abs(values.at(c) - values.at(s))));
  };
  walk(domain.root(), 0.0);
  return out;
}

ExplicitDag random_dag(std::mt19937_64& rng, int n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 1; v < static_cast<std::size_t>(n); ++v) {
    const std::size_t first = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
    edges.emplace_back(first, v);
    if (v > 1 && rng() % 3 == 0) {
      const std::size_t second = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
      if (second != first) edges.emplace_back(second, v);
    }
  }
  return ExplicitDag(static_cast<std::size_t>(n), edges);
}

void expect_gap_forms_agree(const Domain& domain, const ValueMap& values) {
  const auto oracle = gaps_by_path_enumeration(domain, values);
  const Gaps out = gaps(domain, values);
  ASSERT_EQ(out.leaves.size(), oracle.size());
  for (const auto& leaf : out.leaves) {
    EXPECT_DOUBLE_EQ(leaf.gap, oracle.at(leaf.leaf)) << to_string(leaf.leaf);
    EXPECT_DOUBLE_EQ(path_gap(domain, values, leaf.leaf), oracle.at(leaf.leaf)) << to_string(leaf.leaf);
  }
}

TEST(GapForms, AgreeOnSyntheticDomains) {
  const FixedDepthLattice lattice(6, 3);
  const FixedDepthTree tree(6, 3);
  expect_gap_forms_agree(lattice, benchmark_values(lattice));
  expect_gap_forms_agree(tree, benchmark_values(tree));
  const FeatureLattice features(5);
  const SyntheticScores scores{{0.4, -0.2, 0.1, 0.3, -0.5}};
  expect_gap_forms_agree(features, compute_values(features, [&](const StateKey& s) { return sigmoid_mean(scores, s); }));
}

TEST(GapForms, AgreeOnRandomDags) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 200)(rng);
    const ExplicitDag g = random_dag(rng, n);
    std::map<StateKey, double> mean;
    const ValueMap values = compute_values(g, [&](const StateKey& s) {
      return mean.try_emplace(s, std::uniform_real_distribution<double>(0, 1)(rng)).first->second;
    });
    expect_gap_forms_agree(g, values);
  }
}

TEST(ValueMap, EqualsMaxOverDescendantLeaves) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ExplicitDag g = random_dag(rng, std::uniform_int_distribution<int>(2, 120)(rng));
    std::map<StateKey, double> mean;
    const ValueMap values = compute_values(g, [&](const StateKey& s) {
      return mean.try_emplace(s, std::uniform_real_distribution<double>(0, 1)(rng)).first->second;
    });
    for (const auto& s : values.states) {
      double best = -1;
      std::vector<StateKey> stack{s};
      while (!stack.empty()) {
        const StateKey cur = stack.back();
        stack.pop_back();
        const auto kids = g.children(cur);
        if (kids.empty()) best = std::max(best, mean.at(cur));
        for (const auto& c : kids) stack.push_back(c);
      }
      EXPECT_EQ(values.at(s), best);
    }
  }
}

TEST(ValueMap, RejectsMeansOutsideUnitInterval) {
  ExplicitDag g(2, {{0, 1}});
  EXPECT_THROW(compute_values(g, [](const StateKey&) { return 1.5; }), InputError);
}

}  // namespace
}  // namespace dagbandit
