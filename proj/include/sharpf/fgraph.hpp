#pragma once

#include "canon.hpp"
#include "copies.hpp"
#include "errors.hpp"
#include "fedge.hpp"
#include "graph.hpp"
#include "pattern.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sharpf {

using BigInt = boost::multiprecision::cpp_int;

inline Graph shadow(const FGraph& h) {
  std::vector<Edge> es;
  for (const auto& e : h.fedges()) es.insert(es.end(), e.edges.begin(), e.edges.end());
  return Graph(h.vertices(), std::move(es));
}

inline int nullity(const FGraph& h) {
  if (h.fedges().empty()) return 0;
  int r = static_cast<int>(h.fedges().front().vertices.size());
  int c = components(shadow(h)).count;
  return (r - 1) * h.num_fedges() + c - h.num_vertices();
}

enum class CycleKind { avoidable, clean_cycle, other };

inline const char* to_string(CycleKind k) {
  switch (k) {
    case CycleKind::avoidable: return "avoidable";
    case CycleKind::clean_cycle: return "clean_cycle";
    default: return "other";
  }
}

struct CycleClass {
  CycleKind kind = CycleKind::other;
  int length = 0;
  bool sparse = false;
  int nullity = 0;
  // Clean cycles: F-edge indices in cyclic order and the overlap vertices.
  std::vector<int> order;
  std::vector<Vertex> overlaps;
};

inline CycleClass classify(const FGraph& h) {
  CycleClass cc;
  cc.nullity = nullity(h);
  const auto& es = h.fedges();
  int k = h.num_fedges();
  bool connected = k > 0 && components(shadow(h)).count == 1;
  if (connected && cc.nullity >= 2) {
    cc.kind = CycleKind::avoidable;
    return cc;
  }
  if (k == 2) {
    auto ov = overlap(es[0], es[1]);
    if (ov.size() == 2 && h.num_vertices() == static_cast<int>(es[0].vertices.size() * 2 - 2)) {
      cc.kind = CycleKind::clean_cycle;
      cc.length = 2;
      Edge e = make_edge(ov[0], ov[1]);
      cc.sparse = es[0].has_edge(e) && es[1].has_edge(e);
      cc.order = {0, 1};
      cc.overlaps = ov;
    }
    return cc;
  }
  if (k < 3 || !connected) return cc;
  // Each F-edge meets exactly two others, in one vertex each, along one cycle.
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      int o = overlap_size(es[i], es[j]);
      if (o > 1) return cc;
      if (o == 1) {
        nbr[i].push_back(j);
        nbr[j].push_back(i);
      }
    }
  for (const auto& l : nbr)
    if (l.size() != 2) return cc;
  std::vector<int> order{0};
  int prev = -1, cur = 0;
  for (int step = 1; step < k; ++step) {
    int next = nbr[cur][0] == prev ? nbr[cur][1] : nbr[cur][0];
    if (next == 0) return cc;
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  if (nbr[cur][0] != 0 && nbr[cur][1] != 0) return cc;
  std::vector<Vertex> ovs;
  for (int i = 0; i < k; ++i) ovs.push_back(overlap(es[order[i]], es[order[(i + 1) % k]]).front());
  std::vector<Vertex> sorted = ovs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return cc;
  cc.kind = CycleKind::clean_cycle;
  cc.length = k;
  cc.sparse = false;
  cc.order = order;
  cc.overlaps = ovs;
  return cc;
}

inline std::vector<FEdge> induced_f_edges(const FGraph& h, const Pattern& f) {
  std::vector<FEdge> out;
  for (auto& e : enumerate_copies(shadow(h), f))
    if (!h.contains(e)) out.push_back(std::move(e));
  return out;
}

inline bool covers_edges(const FGraph& h, const FEdge& target) {
  for (const auto& ed : target.edges) {
    bool found = false;
    for (const auto& e : h.fedges())
      if (e.has_edge(ed)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

// Smallest sub-F-graph with at most e(F) F-edges that induces target and is an
// avoidable configuration or a clean cycle.
inline FGraph inducing_witness(const FGraph& h, const Pattern& f, const FEdge& target) {
  if (h.contains(target)) throw DomainError("target is an F-edge of the F-graph");
  std::vector<int> cand;
  for (int i = 0; i < h.num_fedges(); ++i) {
    const auto& e = h.fedges()[i];
    for (const auto& ed : target.edges)
      if (e.has_edge(ed)) {
        cand.push_back(i);
        break;
      }
  }
  int m = static_cast<int>(cand.size());
  std::vector<int> pick;
  std::optional<FGraph> found;
  std::function<void(int, int)> rec = [&](int start, int want) {
    if (found) return;
    if (static_cast<int>(pick.size()) == want) {
      FGraph sub = h.select(pick);
      if (!covers_edges(sub, target)) return;
      auto cc = classify(sub);
      if (cc.kind == CycleKind::avoidable || cc.kind == CycleKind::clean_cycle) found = std::move(sub);
      return;
    }
    for (int i = start; i < m && !found; ++i) {
      pick.push_back(cand[i]);
      rec(i + 1, want);
      pick.pop_back();
    }
  };
  for (int size = 2; size <= std::min(m, f.s) && !found; ++size) rec(0, size);
  if (!found) throw WitnessNotFound("no inducing witness with at most e(F) F-edges for " + describe(target));
  return *found;
}

// Connected groups of F-edges (sharing vertices).
inline std::vector<std::vector<int>> fedge_components(const FGraph& h) {
  int k = h.num_fedges();
  std::vector<int> comp(static_cast<std::size_t>(k), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < k; ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::vector<int> stack{s};
    comp[s] = static_cast<int>(out.size()) - 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      out.back().push_back(x);
      for (int y = 0; y < k; ++y)
        if (comp[y] < 0 && overlap_size(h.fedges()[x], h.fedges()[y]) > 0) {
          comp[y] = comp[s];
          stack.push_back(y);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// Calls visit(indices) on each connected F-edge subset of the listed F-edges
// with exactly `size` members; stops when visit returns true.
inline bool for_each_connected_fedge_subset(const FGraph& h, const std::vector<int>& pool, int size,
                                            const std::function<bool(const std::vector<int>&)>& visit,
                                            std::uint64_t& budget) {
  int m = static_cast<int>(pool.size());
  std::vector<std::vector<int>> near(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && overlap_size(h.fedges()[pool[i]], h.fedges()[pool[j]]) > 0) near[i].push_back(j);
  std::vector<char> mark(static_cast<std::size_t>(m), 0);
  std::vector<int> subset;
  std::function<bool(std::vector<int>, int)> extend = [&](std::vector<int> ext, int root) -> bool {
    if (budget == 0) throw ResourceLimitError("connected F-edge subset enumeration exceeded cap");
    --budget;
    if (static_cast<int>(subset.size()) == size) {
      std::vector<int> idx;
      for (int i : subset) idx.push_back(pool[i]);
      std::sort(idx.begin(), idx.end());
      return visit(idx);
    }
    while (!ext.empty()) {
      int w = ext.back();
      ext.pop_back();
      std::vector<int> next = ext, marked;
      for (int u : near[w])
        if (u > root && !mark[u]) {
          next.push_back(u);
          marked.push_back(u);
        }
      for (int u : marked) mark[u] = 1;
      subset.push_back(w);
      bool stop = extend(std::move(next), root);
      subset.pop_back();
      for (int u : marked) mark[u] = 0;
      if (stop) return true;
    }
    return false;
  };
  for (int root = 0; root < m; ++root) {
    std::vector<int> ext;
    mark[root] = 1;
    for (int u : near[root])
      if (u > root) {
        ext.push_back(u);
        mark[u] = 1;
      }
    subset = {root};
    bool stop = extend(ext, root);
    mark[root] = 0;
    for (int u : near[root]) mark[u] = 0;
    if (stop) return true;
  }
  return false;
}

// A smallest connected sub-F-graph with nullity >= 2 and at most max_fedges F-edges.
inline std::optional<FGraph> find_avoidable(const FGraph& h, int max_fedges,
                                            std::uint64_t cap = kDefaultEnumerationCap) {
  if (max_fedges < 2) throw DomainError("max_fedges must be at least 2");
  std::optional<FGraph> best;
  std::uint64_t budget = cap;
  for (const auto& comp : fedge_components(h)) {
    // Nullity only grows as a connected F-graph grows, so a component with
    // nullity <= 1 contains no avoidable configuration.
    if (nullity(h.select(comp)) < 2) continue;
    int limit = std::min<int>(max_fedges, static_cast<int>(comp.size()));
    if (best) limit = std::min(limit, best->num_fedges() - 1);
    for (int size = 2; size <= limit; ++size) {
      bool hit = for_each_connected_fedge_subset(
          h, comp, size,
          [&](const std::vector<int>& idx) {
            FGraph sub = h.select(idx);
            if (nullity(sub) >= 2) {
              best = std::move(sub);
              return true;
            }
            return false;
          },
          budget);
      if (hit) break;
    }
  }
  return best;
}

// Colored incidence encoding: vertices, F-edges, and (F-edge, edge) nodes.
inline ColoredGraph fgraph_encoding(const FGraph& h) {
  int nv = h.num_vertices();
  int nodes = nv;
  for (const auto& e : h.fedges()) nodes += 1 + static_cast<int>(e.edges.size());
  ColoredGraph c(nodes);
  int next = nv;
  auto vid = [&](Vertex x) {
    return static_cast<int>(std::lower_bound(h.vertices().begin(), h.vertices().end(), x) - h.vertices().begin());
  };
  for (const auto& e : h.fedges()) {
    int fe = next++;
    c.color[fe] = 1;
    for (const auto& ed : e.edges) {
      int inc = next++;
      c.color[inc] = 2;
      c.add_edge(fe, inc);
      c.add_edge(inc, vid(ed.u));
      c.add_edge(inc, vid(ed.v));
    }
  }
  return c;
}

inline std::uint64_t fgraph_automorphisms(const FGraph& h) { return automorphism_count(fgraph_encoding(h)); }

inline std::string fgraph_canonical_form(const FGraph& h) {
  return "fv" + std::to_string(h.num_vertices()) + "fe" + std::to_string(h.num_fedges()) + ":" +
         to_hex(canonical_certificate(fgraph_encoding(h)));
}

// Number of distinct copies of the shape on vertex set [n].
inline BigInt count_copies(const FGraph& shape, long long n) {
  int v = shape.num_vertices();
  if (n < v) throw DomainError("count_copies needs n >= v(shape)");
  BigInt falling = 1;
  for (int i = 0; i < v; ++i) falling *= (n - i);
  return falling / fgraph_automorphisms(shape);
}

inline double expected_copies(const FGraph& shape, long long n, double pi) {
  return static_cast<double>(count_copies(shape, n)) * std::pow(pi, shape.num_fedges());
}

inline std::map<Vertex, int> f_degrees(const FGraph& h) {
  std::map<Vertex, int> deg;
  for (Vertex x : h.vertices()) deg[x] = 0;
  for (const auto& e : h.fedges())
    for (Vertex x : e.vertices) ++deg[x];
  return deg;
}

inline int max_f_degree(const FGraph& h) {
  int best = 0;
  for (const auto& [x, d] : f_degrees(h)) best = std::max(best, d);
  return best;
}

// All clean-cycle sub-F-graphs with length <= max_len.
inline std::vector<FGraph> enumerate_clean_cycles(const FGraph& h, const Pattern& f, int max_len,
                                                  std::uint64_t cap = kDefaultEnumerationCap) {
  (void)f;
  if (max_len < 2) throw DomainError("max_len must be at least 2");
  std::vector<FGraph> out;
  const auto& es = h.fedges();
  int k = h.num_fedges();
  auto push = [&](FGraph g) {
    if (out.size() >= cap) throw ResourceLimitError("clean cycle enumeration exceeded cap");
    out.push_back(std::move(g));
  };
  std::vector<std::vector<int>> single(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      int o = overlap_size(es[i], es[j]);
      if (o == 2) {
        FGraph c = h.select({i, j});
        if (classify(c).kind == CycleKind::clean_cycle) push(std::move(c));
      } else if (o == 1) {
        single[i].push_back(j);
        single[j].push_back(i);
      }
    }
  // Longer cycles: paths from the smallest index, closed back to it, with the
  // second member smaller than the last to fix orientation.
  std::vector<int> path;
  std::vector<char> on(static_cast<std::size_t>(k), 0);
  std::function<void(int)> dfs = [&](int start) {
    int cur = path.back();
    int len = static_cast<int>(path.size());
    if (len >= 3 && path[1] < path.back() && overlap_size(es[cur], es[start]) == 1) {
      FGraph c = h.select(path);
      auto cc = classify(c);
      if (cc.kind == CycleKind::clean_cycle && cc.length == len) push(std::move(c));
    }
    if (len == max_len) return;
    for (int nx : single[cur]) {
      if (nx <= start || on[nx]) continue;
      bool ok = true;
      for (int i = 1; i + 1 < len && ok; ++i) ok = overlap_size(es[path[i]], es[nx]) == 0;
      if (!ok) continue;
      on[nx] = 1;
      path.push_back(nx);
      dfs(start);
      path.pop_back();
      on[nx] = 0;
    }
  };
  for (int s = 0; s < k; ++s) {
    path = {s};
    on[s] = 1;
    dfs(s);
    on[s] = 0;
  }
  return out;
}

}  // namespace sharpf
