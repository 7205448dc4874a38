#pragma once

#include "cycle_types.hpp"
#include "errors.hpp"
#include "fedge.hpp"
#include "fgraph.hpp"
#include "graph.hpp"
#include "pattern.hpp"
#include "rational.hpp"
#include "subgraphs.hpp"

#include <compare>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace sharpf {

// A dummy edge is keyed by the two F-edges of its sparse clean cycle.
struct DummyKey {
  FEdge a;
  FEdge b;

  DummyKey() = default;
  DummyKey(FEdge x, FEdge y) : a(std::move(x)), b(std::move(y)) {
    if (b < a) std::swap(a, b);
  }
  friend bool operator==(const DummyKey&, const DummyKey&) = default;
  friend std::strong_ordering operator<=>(const DummyKey& x, const DummyKey& y) {
    if (auto c = x.a <=> y.a; c != 0) return c;
    return x.b <=> y.b;
  }
};

struct DGraph {
  Graph base;
  std::set<DummyKey> dummies;

  int num_edges() const { return base.num_edges() + static_cast<int>(dummies.size()); }

  void add_dummy(DummyKey key) {
    auto cc = classify(FGraph::of({key.a, key.b}));
    if (cc.kind != CycleKind::clean_cycle || !cc.sparse)
      throw DomainError("dummy key is not a sparse clean cycle");
    for (const auto* e : {&key.a, &key.b})
      for (Vertex x : e->vertices)
        if (!base.has_vertex(x)) throw DomainError("dummy key uses a vertex outside the d-graph");
    dummies.insert(std::move(key));
  }
};

inline Graph project(const DGraph& g) { return g.base; }

struct CleanDCycle {
  FGraph cycle;
  DGraph dgraph;
  int k = 0;
  bool sparse = false;
};

inline CleanDCycle dcycle_of(const FGraph& c, const Pattern& f) {
  (void)f;
  auto cc = classify(c);
  if (cc.kind != CycleKind::clean_cycle) throw NotACleanCycle("not a clean cycle: " + describe(c));
  CleanDCycle d;
  d.cycle = c;
  d.k = cc.length;
  d.sparse = cc.sparse;
  d.dgraph.base = shadow(c);
  if (cc.sparse) d.dgraph.add_dummy(DummyKey(c.fedges()[0], c.fedges()[1]));
  return d;
}

// Largest density over proper sub-d-graphs. A sub-d-graph may hold the dummy
// only when it spans every vertex.
inline Rational max_proper_subdensity_exhaustive(const DGraph& g) {
  const Graph& b = g.base;
  int v = b.num_vertices();
  if (v > 24) throw ResourceLimitError("exhaustive sub-d-graph scan limited to 24 vertices");
  int e = g.num_edges();
  Rational best = v > 0 && e > 0 ? Rational(e - 1, v) : Rational(0);
  DenseGraph d = DenseGraph::of(b);
  std::vector<std::uint32_t> nbr(static_cast<std::size_t>(v), 0);
  for (int i = 0; i < v; ++i)
    for (int j : d.adj[i]) nbr[i] |= 1U << j;
  std::uint32_t full = (1U << v) - 1;
  for (std::uint32_t w = 1; w < full; ++w) {
    int edges = 0;
    for (std::uint32_t rest = w; rest; rest &= rest - 1) edges += __builtin_popcount(nbr[__builtin_ctz(rest)] & w);
    Rational dens(edges / 2, __builtin_popcount(w));
    if (dens > best) best = dens;
  }
  return best;
}

inline Rational max_proper_subdensity_flow(const DGraph& g) {
  int v = g.base.num_vertices();
  int e = g.num_edges();
  Rational best = v > 0 && e > 0 ? Rational(e - 1, v) : Rational(0);
  Rational inner = densest_proper_subgraph(g.base).density;
  return std::max(best, inner);
}

inline constexpr int kExhaustiveDCycleLimit = 20;

struct DBalanceRow {
  std::string pattern;
  int k = 0;
  bool sparse = false;
  std::string signature;
  int vertices = 0;
  int edges = 0;
  Rational density{0};
  Rational max_proper_density{0};
  bool strict_ok = false;
};

struct DBalanceReport {
  std::vector<DBalanceRow> rows;
  bool ok() const {
    for (const auto& r : rows)
      if (!r.strict_ok) return false;
    return true;
  }
};

inline DBalanceReport verify_clean_dcycles_strictly_balanced(const Pattern& f, int max_len,
                                                            bool throw_on_counterexample = true) {
  DBalanceReport rep;
  for (const auto& t : enumerate_cycle_types(f, max_len)) {
    CleanDCycle d = dcycle_of(t.shape, f);
    DBalanceRow row;
    row.pattern = f.name;
    row.k = d.k;
    row.sparse = d.sparse;
    row.signature = t.signature;
    row.vertices = d.dgraph.base.num_vertices();
    row.edges = d.dgraph.num_edges();
    row.density = Rational(row.edges, row.vertices);
    row.max_proper_density = row.vertices <= kExhaustiveDCycleLimit ? max_proper_subdensity_exhaustive(d.dgraph)
                                                                    : max_proper_subdensity_flow(d.dgraph);
    bool edge_count_ok = row.edges == d.k * f.s;
    bool density_ok = row.density == f.d1;
    row.strict_ok = edge_count_ok && density_ok && row.max_proper_density < row.density;
    if (!row.strict_ok && throw_on_counterexample)
      throw CounterexampleError("clean d-cycle type " + row.signature + " of " + f.name +
                                " is not strictly balanced: " + describe(t.shape));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline void write_dbalance_csv(std::ostream& out, const DBalanceReport& rep) {
  out << "pattern,k,sparsity,overlap_signature,density_num,density_den,max_proper_density,strict_ok\n";
  for (const auto& r : rep.rows)
    out << r.pattern << "," << r.k << "," << (r.sparse ? "sparse" : "dense") << "," << r.signature << ","
        << r.density.numerator() << "," << r.density.denominator() << "," << to_string(r.max_proper_density) << ","
        << (r.strict_ok ? "true" : "false") << "\n";
}

}  // namespace sharpf
