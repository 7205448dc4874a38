#pragma once

#include "errors.hpp"
#include "graph.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace sharpf {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Every connected subgraph with at most max_vertices vertices: single vertices,
// then connected edge subsets. Each is emitted exactly once.
inline std::uint64_t enumerate_connected_subgraphs(const Graph& g, int max_vertices,
                                                   const std::function<void(const Graph&)>& emit,
                                                   std::uint64_t cap = kDefaultEnumerationCap) {
  if (max_vertices < 1) throw DomainError("max_vertices must be at least 1");
  std::uint64_t emitted = 0;
  auto bump = [&] {
    if (++emitted > cap) throw ResourceLimitError("connected subgraph enumeration exceeded cap");
  };
  for (Vertex x : g.vertices()) {
    bump();
    emit(Graph::from_sorted({x}, {}));
  }
  if (max_vertices < 2) return emitted;

  const auto& es = g.edges();
  int m = static_cast<int>(es.size());
  std::vector<std::vector<int>> near(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && (es[i].u == es[j].u || es[i].u == es[j].v || es[i].v == es[j].u ||
                     es[i].v == es[j].v))
        near[i].push_back(j);

  std::vector<int> state(static_cast<std::size_t>(m), 0);  // 1 in subset, 2 in closed neighborhood
  std::vector<int> vcount(static_cast<std::size_t>(g.num_vertices()), 0);
  int nverts = 0;
  std::vector<int> subset;

  auto add_vertices = [&](int e, int delta) {
    for (Vertex x : {es[e].u, es[e].v}) {
      int ix = g.index_of(x);
      if (delta > 0 && vcount[ix]++ == 0) ++nverts;
      if (delta < 0 && --vcount[ix] == 0) --nverts;
    }
  };
  auto new_vertices = [&](int e) {
    return (vcount[g.index_of(es[e].u)] == 0) + (vcount[g.index_of(es[e].v)] == 0);
  };

  // Exclusive-neighborhood growth: an edge joins the extension only when it was
  // not adjacent to any earlier member.
  std::vector<int> neighborhood_mark(static_cast<std::size_t>(m), 0);
  std::function<void(std::vector<int>, int)> extend = [&](std::vector<int> ext, int root) {
    std::vector<Edge> cur;
    for (int i : subset) cur.push_back(es[i]);
    bump();
    emit(Graph::of_edges(std::move(cur)));
    while (!ext.empty()) {
      int w = ext.back();
      ext.pop_back();
      if (nverts + new_vertices(w) > max_vertices) continue;
      std::vector<int> next = ext;
      std::vector<int> marked;
      for (int u : near[w])
        if (u > root && neighborhood_mark[u] == 0) {
          next.push_back(u);
          marked.push_back(u);
        }
      for (int u : marked) neighborhood_mark[u] = 1;
      subset.push_back(w);
      add_vertices(w, +1);
      extend(std::move(next), root);
      add_vertices(w, -1);
      subset.pop_back();
      for (int u : marked) neighborhood_mark[u] = 0;
    }
  };

  for (int root = 0; root < m; ++root) {
    std::vector<int> ext;
    neighborhood_mark[root] = 1;
    for (int u : near[root])
      if (u > root) {
        ext.push_back(u);
        neighborhood_mark[u] = 1;
      }
    subset = {root};
    add_vertices(root, +1);
    extend(ext, root);
    add_vertices(root, -1);
    neighborhood_mark[root] = 0;
    for (int u : near[root]) neighborhood_mark[u] = 0;
    (void)state;
  }
  return emitted;
}

struct DensityReport {
  Rational edge_density{0};
  std::optional<Rational> one_density;
  bool strictly_balanced = false;
  bool strictly_1_balanced = false;
  // Vertex sets of proper subgraphs violating each property (empty when none).
  std::vector<Vertex> balance_violation;
  std::vector<Vertex> one_balance_violation;
};

inline constexpr int kExhaustiveDensityLimit = 22;

// Exact maximum density over subgraphs is attained on induced subgraphs, so
// both properties reduce to a scan over proper vertex subsets.
inline DensityReport density_report(const Graph& g) {
  int v = g.num_vertices(), e = g.num_edges();
  if (v > kExhaustiveDensityLimit)
    throw ResourceLimitError("density_report limited to " + std::to_string(kExhaustiveDensityLimit) +
                             " vertices");
  DensityReport r;
  if (v > 0) r.edge_density = Rational(e, v);
  if (v >= 2) r.one_density = Rational(e, v - 1);
  DenseGraph d = DenseGraph::of(g);
  std::vector<std::uint32_t> nbr(static_cast<std::size_t>(v), 0);
  for (int i = 0; i < v; ++i)
    for (int j : d.adj[i]) nbr[i] |= 1U << j;
  r.strictly_balanced = true;
  r.strictly_1_balanced = v >= 2;
  std::uint32_t full = v == 32 ? ~0U : ((1U << v) - 1);
  for (std::uint32_t w = 1; w < full; ++w) {
    int size = __builtin_popcount(w);
    int edges = 0;
    for (std::uint32_t rest = w; rest; rest &= rest - 1) {
      int i = __builtin_ctz(rest);
      edges += __builtin_popcount(nbr[i] & w);
    }
    edges /= 2;
    // e(W)/|W| >= e/v
    if (r.strictly_balanced && static_cast<std::int64_t>(edges) * v >= static_cast<std::int64_t>(e) * size) {
      r.strictly_balanced = false;
      for (int i = 0; i < v; ++i)
        if (w >> i & 1U) r.balance_violation.push_back(d.labels[i]);
    }
    if (r.strictly_1_balanced && size >= 2 && edges >= 1 &&
        static_cast<std::int64_t>(edges) * (v - 1) >= static_cast<std::int64_t>(e) * (size - 1)) {
      r.strictly_1_balanced = false;
      for (int i = 0; i < v; ++i)
        if (w >> i & 1U) r.one_balance_violation.push_back(d.labels[i]);
    }
  }
  return r;
}

namespace flow_detail {

struct MaxFlow {
  struct Arc {
    int to;
    std::int64_t cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;
  std::vector<int> level, it;

  explicit MaxFlow(int nodes) : out(static_cast<std::size_t>(nodes)) {}

  void add(int a, int b, std::int64_t c, std::int64_t back = 0) {
    out[a].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({b, c});
    out[b].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({a, back});
  }

  bool bfs(int s, int t) {
    level.assign(out.size(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int id : out[x])
        if (arcs[id].cap > 0 && level[arcs[id].to] < 0) {
          level[arcs[id].to] = level[x] + 1;
          q.push(arcs[id].to);
        }
    }
    return level[t] >= 0;
  }

  std::int64_t dfs(int x, int t, std::int64_t f) {
    if (x == t) return f;
    for (int& i = it[x]; i < static_cast<int>(out[x].size()); ++i) {
      int id = out[x][i];
      Arc& a = arcs[id];
      if (a.cap > 0 && level[a.to] == level[x] + 1) {
        std::int64_t got = dfs(a.to, t, std::min(f, a.cap));
        if (got > 0) {
          a.cap -= got;
          arcs[id ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0;
  }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      it.assign(out.size(), 0);
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

  std::vector<char> source_side(int s) {
    std::vector<char> seen(out.size(), 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int id : out[x])
        if (arcs[id].cap > 0 && !seen[arcs[id].to]) {
          seen[arcs[id].to] = 1;
          stack.push_back(arcs[id].to);
        }
    }
    return seen;
  }
};

}  // namespace flow_detail

struct DensestResult {
  Rational density{0};
  std::vector<Vertex> vertices;
};

// Maximum e(W)/|W| over nonempty vertex subsets: min-cut test for a density
// guess, iterated on the improving subset until no subset beats the guess.
inline DensestResult densest_subgraph(const Graph& g) {
  DensestResult best;
  int n = g.num_vertices();
  if (n == 0) return best;
  best.vertices = {g.vertices().front()};
  std::int64_t m = g.num_edges();
  if (m == 0) return best;
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges()) {
    ++deg[g.index_of(e.u)];
    ++deg[g.index_of(e.v)];
  }
  Rational guess(0);
  while (true) {
    std::int64_t a = guess.numerator(), b = guess.denominator();
    int s = n, t = n + 1;
    flow_detail::MaxFlow mf(n + 2);
    for (int i = 0; i < n; ++i) {
      mf.add(s, i, m * b);
      mf.add(i, t, m * b + 2 * a - deg[i] * b);
    }
    for (const auto& e : g.edges()) {
      int x = g.index_of(e.u), y = g.index_of(e.v);
      mf.add(x, y, b, b);
    }
    std::int64_t cut = mf.run(s, t);
    if (cut >= m * b * n) break;
    auto side = mf.source_side(s);
    std::vector<Vertex> w;
    for (int i = 0; i < n; ++i)
      if (side[i]) w.push_back(g.vertices()[i]);
    Graph sub = g.induced(w);
    Rational dens(sub.num_edges(), sub.num_vertices());
    if (dens <= guess) break;
    guess = dens;
    best.density = dens;
    best.vertices = std::move(w);
  }
  return best;
}

// Densest subgraph among those missing at least one vertex.
inline DensestResult densest_proper_subgraph(const Graph& g) {
  DensestResult best;
  bool have = false;
  for (Vertex x : g.vertices()) {
    std::vector<Vertex> rest;
    for (Vertex y : g.vertices())
      if (y != x) rest.push_back(y);
    if (rest.empty()) continue;
    DensestResult r = densest_subgraph(g.induced(rest));
    if (!have || r.density > best.density) {
      best = r;
      have = true;
    }
  }
  return best;
}

}  // namespace sharpf
