#include "sharpf/fgraph.hpp"
#include "sharpf/sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sharpf;

TEST(Counter, DeterministicAndStreamSensitive) {
  Seed a{42, 0}, b{42, 1};
  EXPECT_EQ(counter_uniform(a, Draw::pair, 7), counter_uniform(a, Draw::pair, 7));
  EXPECT_NE(counter_uniform(a, Draw::pair, 7), counter_uniform(b, Draw::pair, 7));
  EXPECT_NE(counter_uniform(a, Draw::pair, 7), counter_uniform(a, Draw::copy, 7));
  for (int i = 0; i < 1000; ++i) {
    double u = counter_uniform(a, Draw::coin, i);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(PairIndex, Lexicographic) {
  std::uint64_t idx = 0;
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b) ASSERT_EQ(pair_index(9, a, b), idx++);
}

TEST(Gnp, Extremes) {
  EXPECT_EQ(sample_gnp(10, 0.0, {1, 0}).num_edges(), 0);
  EXPECT_EQ(sample_gnp(10, 1.0, {1, 0}).num_edges(), 45);
  EXPECT_EQ(sample_gnp(10, 1.0, {1, 0}).num_vertices(), 10);
  EXPECT_EQ(sample_gnp(30, 0.3, {9, 2}), sample_gnp(30, 0.3, {9, 2}));
}

TEST(Gnp, MeanEdgeCount) {
  double sum = 0;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) sum += sample_gnp(100, 0.5, {static_cast<std::uint64_t>(s), 0}).num_edges();
  double mean = sum / trials;
  double sigma = std::sqrt(4950 * 0.25 / trials);
  EXPECT_LT(std::abs(mean - 2475), 3 * sigma);
}

TEST(Gnp, MonotoneInP) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Graph lo = sample_gnp(20, 0.2, {s, 3}), hi = sample_gnp(20, 0.4, {s, 3});
    for (const auto& e : lo.edges()) ASSERT_TRUE(hi.has_edge(e.u, e.v));
  }
}

TEST(Gnp, StreamsAreIndependent) {
  // 2x2 contingency over (edge in stream 0, same edge in stream 1).
  double t[2][2] = {{0, 0}, {0, 0}};
  for (std::uint64_t s = 0; s < 10000; ++s) {
    Graph a = sample_gnp(10, 0.5, {s, 0}), b = sample_gnp(10, 0.5, {s, 1});
    for (int x = 0; x < 10; ++x)
      for (int y = x + 1; y < 10; ++y) t[a.has_edge(x, y)][b.has_edge(x, y)] += 1;
  }
  double total = t[0][0] + t[0][1] + t[1][0] + t[1][1];
  double chi = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double expect = (t[i][0] + t[i][1]) * (t[0][j] + t[1][j]) / total;
      chi += (t[i][j] - expect) * (t[i][j] - expect) / expect;
    }
  EXPECT_LT(chi, 10.83);
}

TEST(Hf, Extremes) {
  Pattern k3 = preset("k3");
  EXPECT_EQ(sample_hf(6, 0.0, k3, {1, 0}).num_fedges(), 0);
  Pattern k4me = preset("k4me");
  EXPECT_EQ(sample_hf(4, 1.0, k4me, {1, 0}).num_fedges(), 6);
  EXPECT_EQ(sample_hf(9, 0.2, k4me, {5, 5}), sample_hf(9, 0.2, k4me, {5, 5}));
}

TEST(Hf, MeanFEdgeCount) {
  Pattern k3 = preset("k3");
  const int trials = 100000;
  double sum = 0;
  for (int s = 0; s < trials; ++s) sum += sample_hf(6, 0.1, k3, {static_cast<std::uint64_t>(s), 0}).num_fedges();
  double mean = sum / trials;
  EXPECT_LT(std::abs(mean - 2.0), 3 * std::sqrt(20 * 0.09 / trials));
}

TEST(Gstar, CompleteOnFourVertices) {
  Pattern k3 = preset("k3");
  DGraph g = sample_gstar(4, 1.0, k3, {1, 0});
  EXPECT_EQ(g.base.num_edges(), 6);
  EXPECT_EQ(g.dummies.size(), 6u);
  EXPECT_EQ(sample_gstar(8, 0.0, k3, {1, 0}).num_edges(), 0);
}

TEST(Gstar, SparseCycleListMatchesClassification) {
  for (const auto& name : {"k3", "k4me", "c4"}) {
    Pattern f = preset(name);
    CopyIndex index(f, 7);
    std::uint64_t listed = 0;
    for_each_sparse_cycle(index, f, [&](std::uint64_t i, std::uint64_t j) {
      ASSERT_LT(i, j);
      auto cc = classify(FGraph::of({index.copy(i), index.copy(j)}));
      ASSERT_EQ(cc.kind, CycleKind::clean_cycle);
      ASSERT_TRUE(cc.sparse);
      ++listed;
    });
    std::uint64_t brute = 0;
    for (std::uint64_t i = 0; i < index.size(); ++i)
      for (std::uint64_t j = i + 1; j < index.size(); ++j) {
        auto cc = classify(FGraph::of({index.copy(i), index.copy(j)}));
        brute += cc.kind == CycleKind::clean_cycle && cc.sparse;
      }
    EXPECT_EQ(listed, brute) << name;
  }
}

TEST(Gstar, ProjectionMatchesGnpInLaw) {
  Pattern k3 = preset("k3");
  const int trials = 10000;
  double a = 0, b = 0, a2 = 0, b2 = 0;
  for (int s = 0; s < trials; ++s) {
    double x = project(sample_gstar(8, 0.3, k3, {static_cast<std::uint64_t>(s), 11})).num_edges();
    double y = sample_gnp(8, 0.3, {static_cast<std::uint64_t>(s), 12}).num_edges();
    a += x;
    b += y;
    a2 += x * x;
    b2 += y * y;
  }
  double ma = a / trials, mb = b / trials;
  double va = a2 / trials - ma * ma, vb = b2 / trials - mb * mb;
  double z = (ma - mb) / std::sqrt((va + vb) / trials);
  EXPECT_LT(std::abs(z), 3.0);
  EXPECT_LT(std::abs(va / vb - 1.0), 0.1);
}

TEST(Merge, Examples) {
  Pattern f = preset("k4me");
  FGraph h = FGraph::of({make_fedge(f, {0, 1, 2, 3}), make_fedge(f, {0, 2, 1, 3})});
  EXPECT_EQ(merge_to_hr(h).size(), 1u);
  EXPECT_TRUE(merge_to_hr(FGraph(5)).empty());
}
