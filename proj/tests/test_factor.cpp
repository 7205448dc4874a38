#include "oracles.hpp"
#include "sharpf/factor.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sharpf;

TEST(FIsolated, EmptyGraphAllIsolated) {
  auto iso = f_isolated(Graph(5), preset("k3"));
  EXPECT_EQ(iso.isolated.size(), 5U);
}

TEST(FIsolated, K4AllDegreeThree) {
  auto iso = f_isolated(complete_graph(4), preset("k3"));
  EXPECT_TRUE(iso.isolated.empty());
  for (auto [x, d] : iso.degrees) EXPECT_EQ(d, 3) << x;
}

TEST(FIsolated, DiamondPlusVertex) {
  Graph g = Graph::from_pairs({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
  g.add_vertex(4);
  auto iso = f_isolated(g, preset("k3"));
  EXPECT_EQ(iso.isolated, std::vector<Vertex>{4});
  EXPECT_EQ(iso.degrees.at(1), 2);
  EXPECT_EQ(iso.degrees.at(2), 2);
  EXPECT_EQ(iso.degrees.at(0), 1);
}

TEST(Factor, K6HasTwoTriangles) {
  auto f = preset("k3");
  Graph g = complete_graph(6);
  auto res = find_f_factor(g, f);
  ASSERT_EQ(res.status, FactorStatus::found);
  EXPECT_EQ(res.certificate->parts.size(), 2U);
  EXPECT_TRUE(validate_certificate(*res.certificate, g, f));
}

TEST(Factor, TwoDisjointTriangles) {
  auto f = preset("k3");
  Graph g = Graph::from_pairs({{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  auto res = find_f_factor(g, f);
  ASSERT_EQ(res.status, FactorStatus::found);
  EXPECT_TRUE(validate_certificate(*res.certificate, g, f));
  EXPECT_EQ(certificate_to_json(*res.certificate).dump(), "[[0,1,2],[3,4,5]]");
}

TEST(Factor, C6Absent) {
  auto res = find_f_factor(cycle_graph(6), preset("k3"));
  EXPECT_EQ(res.status, FactorStatus::absent);
}

TEST(Factor, Divisibility) {
  auto res = find_f_factor(complete_graph(7), preset("k3"));
  EXPECT_EQ(res.status, FactorStatus::indivisible);
  EXPECT_EQ(res.reason, "divisibility");
}

TEST(Factor, BudgetExhaustedIsDistinct) {
  auto f = preset("k3");
  // Two K4 blocks joined so triangles exist everywhere but no factor on 12 vertices.
  Graph g(12);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) g.add_edge(a, b);
  for (int a = 4; a < 12; ++a)
    for (int b = a + 1; b < 12; ++b)
      if ((a + b) % 3 != 0) g.add_edge(a, b);
  auto full = find_f_factor(g, f);
  ASSERT_NE(full.status, FactorStatus::budget_exhausted);
  auto cut = find_f_factor(g, f, 1);
  if (full.nodes > 1) {
    EXPECT_EQ(cut.status, FactorStatus::budget_exhausted);
    EXPECT_LE(cut.nodes, 1U);
  }
}

TEST(Factor, AgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(11);
  const char* names[] = {"k3", "k3", "c4", "k4me", "k4"};
  int found = 0;
  for (int t = 0; t < 400; ++t) {
    auto f = preset(names[t % 5]);
    int n = f.r * (1 + static_cast<int>(rng() % (12 / f.r)));
    double p = 0.3 + 0.5 * std::uniform_real_distribution<double>()(rng);
    Graph g = oracle::random_graph(n, p, rng);
    auto res = find_f_factor(g, f);
    ASSERT_NE(res.status, FactorStatus::budget_exhausted);
    bool expect = oracle::brute_has_factor(g, f.graph);
    ASSERT_EQ(res.status == FactorStatus::found, expect) << describe(g) << " " << f.name;
    if (expect) {
      ++found;
      EXPECT_TRUE(validate_certificate(*res.certificate, g, f));
      auto copies = enumerate_copies(g, f);
      for (const auto& part : res.certificate->parts)
        EXPECT_TRUE(std::binary_search(copies.begin(), copies.end(), part));
    }
  }
  EXPECT_GT(found, 50);
  EXPECT_LT(found, 400);
}

TEST(Factor, MonotoneUnderEdgeAdditions) {
  std::mt19937_64 rng(5);
  auto f = preset("k3");
  for (int chain = 0; chain < 30; ++chain) {
    Graph g = oracle::random_graph(9, 0.35, rng);
    bool yes = find_f_factor(g, f).status == FactorStatus::found;
    for (int step = 0; step < 20; ++step) {
      int a = static_cast<int>(rng() % 9), b = static_cast<int>(rng() % 9);
      if (a == b || g.has_edge(a, b)) continue;
      g.add_edge(a, b);
      bool now = find_f_factor(g, f).status == FactorStatus::found;
      EXPECT_TRUE(!yes || now);
      yes = now;
    }
  }
}
