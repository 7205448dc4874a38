#include "oracles.hpp"
#include "sharpf/pattern.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

using namespace sharpf;

TEST(Pattern, Triangle) {
  Pattern f = preset("k3");
  EXPECT_EQ(f.r, 3);
  EXPECT_EQ(f.s, 3);
  EXPECT_EQ(f.aut, 6u);
  EXPECT_EQ(f.d1, Rational(3, 2));
  EXPECT_EQ(f.copies_per_set(), 1u);
  EXPECT_TRUE(f.two_connected);
}

TEST(Pattern, DiamondConfirmedByBruteForce) {
  Pattern f = preset("k4me");
  EXPECT_EQ(f.r, 4);
  EXPECT_EQ(f.s, 5);
  EXPECT_EQ(f.aut, 4u);
  EXPECT_EQ(f.aut, oracle::brute_automorphisms(f.graph));
  EXPECT_EQ(f.d1, Rational(5, 3));
  EXPECT_EQ(f.copies_per_set(), 6u);
}

TEST(Pattern, RejectsPathNamingSubgraph) {
  try {
    preset("path4");
    FAIL();
  } catch (const NotStrictly1BalancedError& e) {
    EXPECT_NE(std::string(e.what()).find("1-density 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(preset("star3"), NotStrictly1BalancedError);
  EXPECT_THROW(analyze_pattern(Graph::from_pairs({{0, 1}, {2, 3}})), DisconnectedError);
}

TEST(Pattern, EdgeIsAcceptedAndFlagged) {
  Pattern f = preset("k2");
  EXPECT_TRUE(f.outside_constant_regime);
  EXPECT_EQ(f.d1, Rational(1));
}

TEST(Pattern, AllStrictPresetsAreTwoConnected) {
  for (const auto& name : {"k3", "k4", "k5", "c4", "c5", "c6", "k4me"}) {
    Pattern f = preset(name);
    EXPECT_TRUE(f.two_connected) << name;
    EXPECT_EQ(f.aut, oracle::brute_automorphisms(f.graph)) << name;
  }
}

TEST(Thresholds, PStarValues) {
  Pattern k3 = preset("k3");
  // Quoted reference values are rounded loosely; the formula itself is checked below.
  EXPECT_NEAR(p_star(k3, 60) / 0.13371, 1.0, 1e-3);
  EXPECT_NEAR(p_star(k3, 300) / 0.05043, 1.0, 1e-3);
  EXPECT_NEAR(p_star(k3, 300), std::cbrt(std::log(300.0) / (299.0 * 298.0 / 2.0)), 1e-15);
  double direct = std::cbrt(std::log(60.0) / (59.0 * 58.0 / 2.0));
  EXPECT_NEAR(p_star(k3, 60) / direct, 1.0, 1e-12);
  EXPECT_THROW(p_star(k3, 3), DomainError);
}

TEST(Thresholds, PStarDecreasing) {
  for (const auto& name : {"k3", "k4me", "c5"}) {
    Pattern f = preset(name);
    double prev = 2.0;
    for (long long n = f.r + 1; n <= 1'000'000; n = n < 100 ? n + 1 : n * 11 / 10) {
      double v = p_star(f, n);
      ASSERT_LT(v, prev) << name << " n=" << n;
      prev = v;
    }
  }
}

TEST(Thresholds, DerivedParamsIdentities) {
  Pattern k3 = preset("k3");
  auto t = derive_params(k3, 1024, 0.1, 0.05, 1e-6);
  double expected = std::cbrt(1e-6 / (1 - std::pow(1024.0, -0.1)));
  EXPECT_NEAR(t.p / expected, 1.0, 1e-12);
  EXPECT_GT(t.p, std::cbrt(1e-6));
  EXPECT_DOUBLE_EQ(t.pi_prime, t.pi);
  for (long long n : {10LL, 60LL, 300LL, 5000LL}) {
    for (double delta : {0.05, 0.1, 0.3}) {
      auto u = derive_params(k3, n, delta, 0.01);
      double lhs = std::pow(u.p, 3) * (1 - std::pow(static_cast<double>(n), -delta));
      ASSERT_NEAR(lhs / u.pi, 1.0, 1e-12);
      ASSERT_NEAR(u.Delta, std::pow(n, 0.01) + std::log(n) * std::pow(n, 0.005), 1e-9);
    }
  }
  EXPECT_THROW(derive_params(k3, 10, 0.1, 0.01, 0.9), RangeError);
  EXPECT_THROW(derive_params(k3, 10, 0.0, 0.01), DomainError);
}

TEST(Thresholds, DefaultPiIsTheMaximum) {
  Pattern f = preset("k4me");
  auto t = derive_params(f, 40, 0.1, 0.02);
  double expected = std::pow(40.0, 0.02) / (6.0 * 39.0 * 38.0 * 37.0 / 6.0);
  EXPECT_NEAR(t.pi / expected, 1.0, 1e-12);
}

TEST(Thresholds, MergedProbabilityMatchesInclusionExclusion) {
  using Q = boost::multiprecision::cpp_rational;
  for (const auto& name : {"k3", "k4me", "c4", "k4"}) {
    Pattern f = preset(name);
    auto m = static_cast<int>(f.copies_per_set());
    for (int denom : {100, 1000, 37}) {
      Q pi(1, denom);
      Q sum = 0;
      Q binom = 1;
      for (int k = 1; k <= m; ++k) {
        binom = binom * (m - k + 1) / k;
        Q term = binom;
        for (int i = 0; i < k; ++i) term *= pi;
        sum += (k % 2 ? term : -term);
      }
      double exact = static_cast<double>(sum);
      ASSERT_NEAR(merged_probability(f, 1.0 / denom) / exact, 1.0, 1e-12) << name;
    }
  }
  EXPECT_NEAR(merged_probability(preset("k4me"), 0.01), 0.058520, 5e-7);
}
