#pragma once

#include "../cycle_types.hpp"
#include "../dgraph.hpp"
#include "../errors.hpp"
#include "../fgraph.hpp"
#include "../pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

namespace sharpf {

inline constexpr std::uint64_t kDefaultInventoryCap = 2'000'000;

// Edge set of a d-graph: graph edges plus dummy keys.
struct DEdges {
  std::vector<Edge> edges;
  std::vector<DummyKey> dummies;

  int size() const { return static_cast<int>(edges.size() + dummies.size()); }
};

inline DEdges d_edges_of(const DGraph& g) { return {g.base.edges(), {g.dummies.begin(), g.dummies.end()}}; }

inline int union_size(const DEdges& a, const DEdges& b) {
  std::vector<Edge> e;
  std::set_union(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(), std::back_inserter(e));
  int d = 0;
  auto i = a.dummies.begin(), j = b.dummies.begin();
  while (i != a.dummies.end() || j != b.dummies.end()) {
    if (j == b.dummies.end() || (i != a.dummies.end() && *i < *j)) ++i;
    else if (i == a.dummies.end() || *j < *i) ++j;
    else ++i, ++j;
    ++d;
  }
  return static_cast<int>(e.size()) + d;
}

inline long double falling(long long n, int k) {
  long double out = 1;
  for (int i = 0; i < k; ++i) out *= static_cast<long double>(n - i);
  return out;
}

inline int shape_index(const FGraph& shape, Vertex x) {
  const auto& vs = shape.vertices();
  return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin());
}

// Calls fn(type index, placement) for every clean-cycle placement on [n] of
// the given types, one vertex subset at a time.
template <class Fn>
void for_each_placement(const Pattern& f, const std::vector<CycleType>& types, int n, Fn&& fn) {
  for (int t = 0; t < static_cast<int>(types.size()); ++t) {
    const auto& shape = types[t].shape;
    int v = shape.num_vertices();
    if (v > n) continue;
    std::vector<int> pick(static_cast<std::size_t>(n), 0);
    std::fill(pick.begin(), pick.begin() + v, 1);
    do {
      std::vector<Vertex> subset;
      for (int i = 0; i < n; ++i)
        if (pick[i]) subset.push_back(i);
      std::set<std::vector<FEdge>> seen;
      std::vector<int> perm(static_cast<std::size_t>(v));
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<FEdge> es;
        for (const auto& e : shape.fedges()) {
          std::vector<Vertex> emb;
          for (Vertex x : e.embedding) emb.push_back(subset[perm[shape_index(shape, x)]]);
          es.push_back(make_fedge(f, emb));
        }
        std::sort(es.begin(), es.end());
        if (!seen.insert(es).second) continue;
        fn(t, FGraph::of(std::move(es)));
      } while (std::next_permutation(perm.begin(), perm.end()));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
}

struct InventoryItem {
  int type = 0;
  int k = 0;
  bool sparse = false;
  FGraph cycle;
  DGraph dgraph;
  DEdges dedges;
};

struct CycleInventory {
  std::string pattern;
  int n = 0;
  int s = 0;
  std::vector<CycleType> types;
  std::vector<InventoryItem> items;
  std::vector<std::vector<int>> neighborhoods;

  int size() const { return static_cast<int>(items.size()); }
  double q_H(int i, double pi) const { return std::pow(pi, items[i].k); }
  double q_G(int i, double p) const { return std::pow(p, items[i].k * s); }
};

inline CycleInventory build_inventory(const Pattern& f, int n, int max_len = -1,
                                      std::uint64_t cap = kDefaultInventoryCap) {
  if (max_len < 0) max_len = f.s;
  if (n < 2 * (f.r - 1)) throw DomainError("n must be at least 2(r-1)");
  CycleInventory inv;
  inv.pattern = f.name;
  inv.n = n;
  inv.s = f.s;
  inv.types = enumerate_cycle_types(f, max_len);
  BigInt expected = 0;
  for (const auto& t : inv.types)
    if (t.shape.num_vertices() <= n) expected += count_copies(t.shape, n);
  if (expected > cap) throw ResourceLimitError("cycle inventory exceeds cap of " + std::to_string(cap));
  for_each_placement(f, inv.types, n, [&](int t, FGraph c) {
    InventoryItem it;
    it.type = t;
    it.k = inv.types[t].k;
    it.sparse = inv.types[t].sparse;
    it.dgraph = dcycle_of(c, f).dgraph;
    it.dedges = d_edges_of(it.dgraph);
    it.cycle = std::move(c);
    inv.items.push_back(std::move(it));
  });
  if (BigInt(inv.items.size()) != expected) throw InternalInconsistency("placement count differs from (n)_v/aut");
  int m = inv.size();
  inv.neighborhoods.assign(static_cast<std::size_t>(m), {});
  std::vector<std::vector<int>> by_vertex(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i)
    for (Vertex x : inv.items[i].cycle.vertices()) by_vertex[x].push_back(i);
  for (int i = 0; i < m; ++i) {
    std::vector<int>& nb = inv.neighborhoods[i];
    for (Vertex x : inv.items[i].cycle.vertices()) nb.insert(nb.end(), by_vertex[x].begin(), by_vertex[x].end());
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return inv;
}

}  // namespace sharpf
