#include "fgraph_gen.hpp"
#include "sharpf/coupling/chen_stein.hpp"
#include "sharpf/coupling/inventory.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sharpf;

namespace {

// Clean cycles of length <= max_len among all F-edge subsets on [n].
int brute_cycle_count(const Pattern& f, int n, int max_len) {
  CopyIndex idx(f, n);
  std::vector<FEdge> all;
  for (std::uint64_t i = 0; i < idx.size(); ++i) all.push_back(idx.copy(i));
  int m = static_cast<int>(all.size());
  int count = 0;
  std::vector<int> pick;
  auto rec = [&](auto& self, int start) -> void {
    if (pick.size() >= 2) {
      std::vector<FEdge> es;
      for (int i : pick) es.push_back(all[i]);
      if (classify(FGraph::of(es)).kind == CycleKind::clean_cycle) ++count;
    }
    if (static_cast<int>(pick.size()) == max_len) return;
    for (int i = start; i < m; ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return count;
}

}  // namespace

TEST(Inventory, SmallTriangleCases) {
  auto f = preset("k3");
  EXPECT_THROW(build_inventory(f, 3), DomainError);
  EXPECT_EQ(build_inventory(f, 4).size(), 6);
  for (int n : {4, 5, 6}) EXPECT_EQ(build_inventory(f, n).size(), brute_cycle_count(f, n, 3)) << n;
}

TEST(Inventory, NeighborhoodsSymmetricAndReflexive) {
  auto inv = build_inventory(preset("k3"), 6);
  EXPECT_EQ(inv.size(), 90 + 120);
  for (int i = 0; i < inv.size(); ++i) {
    const auto& nb = inv.neighborhoods[i];
    EXPECT_TRUE(std::binary_search(nb.begin(), nb.end(), i));
    for (int j : nb) EXPECT_TRUE(std::binary_search(inv.neighborhoods[j].begin(), inv.neighborhoods[j].end(), i));
  }
}

TEST(Inventory, DummyCountedInGraphMarginal) {
  auto inv = build_inventory(preset("k3"), 5);
  for (int i = 0; i < inv.size(); ++i) {
    EXPECT_EQ(inv.items[i].dedges.size(), inv.items[i].k * 3);
    EXPECT_DOUBLE_EQ(inv.q_G(i, 0.5), std::pow(0.5, inv.items[i].k * 3));
  }
}

TEST(ChenStein, EmptyInventoryIsZero) {
  CycleInventory inv;
  auto b = chen_stein_bound(inv, 0.1, 0.5);
  EXPECT_EQ(b.bound_H, 0);
  EXPECT_EQ(b.bound_G, 0);
}

TEST(ChenStein, FourVertexTriangleCase) {
  auto f = preset("k3");
  auto inv = build_inventory(f, 4);
  double pi = 0.01;
  // Six sparse 2-cycles (triangle pairs of K4) pairwise share vertices; two
  // distinct pairs use 3 triangles in 24 ordered cases and 4 in the other 6.
  double expect = 4 * (36 * std::pow(pi, 4) + 24 * std::pow(pi, 3) + 6 * std::pow(pi, 4));
  EXPECT_NEAR(chen_stein_bound(inv, pi, 0.3).bound_H, expect, 1e-15);
}

TEST(ChenStein, AggregatedMatchesDirect) {
  for (auto [name, top] : {std::pair{"k3", 7}, std::pair{"c4", 6}}) {
    auto f = preset(name);
    for (int n = 2 * (f.r - 1); n <= top; ++n) {
      auto inv = build_inventory(f, n, std::min(f.s, 3));
      auto direct = chen_stein_bound(inv, 0.05, 0.4);
      auto agg = chen_stein_aggregated(f, n, 0.05, 0.4, std::min(f.s, 3));
      EXPECT_NEAR(agg.bound_H, direct.bound_H, 1e-12 * std::max(1.0, direct.bound_H)) << name << n;
      EXPECT_NEAR(agg.bound_G, direct.bound_G, 1e-12 * std::max(1.0, direct.bound_G)) << name << n;
    }
  }
}

TEST(ChenStein, MonotoneInRate) {
  auto inv = build_inventory(preset("k3"), 6);
  auto hi = chen_stein_bound(inv, 0.02, 0.3);
  auto lo = chen_stein_bound(inv, 0.01, 0.15);
  EXPECT_LT(lo.bound_H, hi.bound_H);
  EXPECT_LT(lo.bound_G, hi.bound_G);
}
