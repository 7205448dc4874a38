#pragma once

#include "errors.hpp"
#include "graph.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace sharpf {

// Vertex-colored simple graph on 0..n-1 for canonical labeling.
struct ColoredGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;
  std::vector<char> mat;
  std::vector<int> color;

  explicit ColoredGraph(int nodes = 0)
      : n(nodes), adj(static_cast<std::size_t>(nodes)),
        mat(static_cast<std::size_t>(nodes) * nodes, 0), color(static_cast<std::size_t>(nodes), 0) {}

  bool has(int a, int b) const { return mat[static_cast<std::size_t>(a) * n + b] != 0; }

  void add_edge(int a, int b) {
    if (a == b || has(a, b)) return;
    mat[static_cast<std::size_t>(a) * n + b] = mat[static_cast<std::size_t>(b) * n + a] = 1;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  static ColoredGraph of(const Graph& g) {
    ColoredGraph c(g.num_vertices());
    for (const auto& e : g.edges()) c.add_edge(g.index_of(e.u), g.index_of(e.v));
    return c;
  }
};

namespace canon_detail {

inline int rank_colors(std::vector<int>& c) {
  std::vector<int> vals = c;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  for (int& x : c) x = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), x) - vals.begin());
  return static_cast<int>(vals.size());
}

// Equitable refinement; output colors are ranks of label-invariant signatures.
inline std::vector<int> refine(const ColoredGraph& g, std::vector<int> c) {
  int k = rank_colors(c);
  std::vector<std::vector<int>> sig(static_cast<std::size_t>(g.n));
  std::vector<int> order(static_cast<std::size_t>(g.n));
  while (k < g.n) {
    for (int v = 0; v < g.n; ++v) {
      auto& s = sig[v];
      s.clear();
      s.push_back(c[v]);
      for (int w : g.adj[v]) s.push_back(c[w]);
      std::sort(s.begin() + 1, s.end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    std::vector<int> next(static_cast<std::size_t>(g.n));
    int rank = 0;
    for (int i = 0; i < g.n; ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++rank;
      next[order[i]] = rank;
    }
    int nk = g.n ? rank + 1 : 0;
    c = std::move(next);
    if (nk == k) break;
    k = nk;
  }
  return c;
}

inline std::vector<int> individualize(const std::vector<int>& c, int v) {
  std::vector<int> d(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) d[i] = 2 * c[i];
  d[v] += 1;
  return d;
}

inline bool discrete(const std::vector<int>& c) {
  std::vector<char> seen(c.size(), 0);
  for (int x : c) {
    if (seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

// First non-singleton cell (lowest color) as a list of vertices.
inline std::vector<int> target_cell(const std::vector<int>& c) {
  std::vector<int> count(c.size(), 0);
  for (int x : c) ++count[x];
  int best = -1;
  for (std::size_t k = 0; k < count.size(); ++k)
    if (count[k] > 1) {
      best = static_cast<int>(k);
      break;
    }
  std::vector<int> cell;
  for (std::size_t v = 0; v < c.size(); ++v)
    if (c[v] == best) cell.push_back(static_cast<int>(v));
  return cell;
}

// Transposition (u v) preserves the colored graph.
inline bool twins(const ColoredGraph& g, int u, int v) {
  if (g.color[u] != g.color[v]) return false;
  for (int w = 0; w < g.n; ++w) {
    if (w == u || w == v) continue;
    if (g.has(u, w) != g.has(v, w)) return false;
  }
  return true;
}

inline std::string leaf_certificate(const ColoredGraph& g, const std::vector<int>& c,
                                    std::vector<int>& order) {
  order.assign(static_cast<std::size_t>(g.n), 0);
  for (int v = 0; v < g.n; ++v) order[c[v]] = v;
  std::string cert;
  cert.reserve(static_cast<std::size_t>(g.n) * 4 + static_cast<std::size_t>(g.n) * g.n / 2);
  for (int i = 0; i < g.n; ++i) {
    unsigned x = static_cast<unsigned>(g.color[order[i]]);
    for (int b = 3; b >= 0; --b) cert.push_back(static_cast<char>((x >> (8 * b)) & 0xFF));
  }
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) cert.push_back(g.has(order[i], order[j]) ? '1' : '0');
  return cert;
}

struct CanonSearch {
  const ColoredGraph& g;
  std::uint64_t node_cap;
  std::uint64_t nodes = 0;
  bool have = false;
  std::string best{};
  std::vector<int> best_order{};
  std::vector<std::vector<int>> automorphisms{};
  std::vector<int> prefix{};

  void run(std::vector<int> c) {
    if (++nodes > node_cap) throw ResourceLimitError("canonical labeling search exceeded node cap");
    c = refine(g, std::move(c));
    if (discrete(c)) {
      std::vector<int> order;
      std::string cert = leaf_certificate(g, c, order);
      if (!have || cert < best) {
        have = true;
        best = std::move(cert);
        best_order = std::move(order);
      } else if (cert == best) {
        std::vector<int> gamma(static_cast<std::size_t>(g.n));
        for (int i = 0; i < g.n; ++i) gamma[best_order[i]] = order[i];
        automorphisms.push_back(std::move(gamma));
      }
      return;
    }
    std::vector<int> cell = target_cell(c);
    std::vector<int> tried;
    for (int v : cell) {
      bool skip = false;
      for (int u : tried)
        if (twins(g, u, v) || same_orbit(u, v)) {
          skip = true;
          break;
        }
      if (skip) continue;
      tried.push_back(v);
      prefix.push_back(v);
      run(individualize(c, v));
      prefix.pop_back();
    }
  }

  // Orbit test under stored automorphisms fixing the current prefix.
  bool same_orbit(int u, int v) const {
    std::vector<int> parent(static_cast<std::size_t>(g.n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const auto& gamma : automorphisms) {
      bool fixes = true;
      for (int p : prefix)
        if (gamma[p] != p) {
          fixes = false;
          break;
        }
      if (!fixes) continue;
      any = true;
      for (int x = 0; x < g.n; ++x) {
        int a = find(x), b = find(gamma[x]);
        if (a != b) parent[a] = b;
      }
    }
    return any && find(u) == find(v);
  }
};

struct IsoSearch {
  const ColoredGraph& g;
  std::uint64_t node_cap;
  std::uint64_t nodes = 0;

  bool extend(std::vector<int> c1, std::vector<int> c2) {
    if (++nodes > node_cap) throw ResourceLimitError("automorphism search exceeded node cap");
    c1 = refine(g, std::move(c1));
    c2 = refine(g, std::move(c2));
    {
      std::vector<int> a = c1, b = c2;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) return false;
    }
    if (discrete(c1)) {
      std::vector<int> at(static_cast<std::size_t>(g.n));
      for (int v = 0; v < g.n; ++v) at[c2[v]] = v;
      for (int v = 0; v < g.n; ++v) {
        int w = at[c1[v]];
        if (g.color[v] != g.color[w]) return false;
        for (int x : g.adj[v])
          if (!g.has(w, at[c1[x]])) return false;
        if (g.adj[v].size() != g.adj[w].size()) return false;
      }
      return true;
    }
    std::vector<int> cell = target_cell(c1);
    int x = cell.front();
    int col = c1[x];
    for (int y = 0; y < g.n; ++y)
      if (c2[y] == col && extend(individualize(c1, x), individualize(c2, y))) return true;
    return false;
  }

  std::uint64_t count(std::vector<int> c) {
    c = refine(g, std::move(c));
    if (discrete(c)) return 1;
    std::vector<int> cell = target_cell(c);
    int v = cell.front();
    std::vector<int> orbit{v};
    for (std::size_t i = 1; i < cell.size(); ++i) {
      int w = cell[i];
      bool member = false;
      for (int u : orbit)
        if (twins(g, u, w)) {
          member = true;
          break;
        }
      if (!member) member = extend(individualize(c, v), individualize(c, w));
      if (member) orbit.push_back(w);
    }
    std::uint64_t rest = count(individualize(c, v));
    std::uint64_t size = orbit.size();
    if (rest > UINT64_MAX / size) throw ResourceLimitError("automorphism count overflows 64 bits");
    return size * rest;
  }
};

inline constexpr std::uint64_t kDefaultNodeCap = 50'000'000;

}  // namespace canon_detail

// Raw canonical certificate of a colored graph; equal iff isomorphic as colored graphs.
inline std::string canonical_certificate(const ColoredGraph& g, std::vector<int>* order = nullptr) {
  canon_detail::CanonSearch s{g, canon_detail::kDefaultNodeCap, 0, false, {}, {}, {}, {}};
  s.run(g.color);
  if (order) *order = s.best_order;
  return s.best;
}

inline std::uint64_t automorphism_count(const ColoredGraph& g) {
  canon_detail::IsoSearch s{g, canon_detail::kDefaultNodeCap};
  return s.count(g.color);
}

inline std::string to_hex(const std::string& raw) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(raw.size() * 2);
  for (unsigned char ch : raw) {
    out.push_back(digits[ch >> 4]);
    out.push_back(digits[ch & 15]);
  }
  return out;
}

inline std::string canonical_form(const Graph& g) {
  ColoredGraph c = ColoredGraph::of(g);
  std::string cert = canonical_certificate(c);
  // Colors are all zero; keep only the adjacency bits, packed to hex.
  std::string bits = cert.substr(static_cast<std::size_t>(4) * c.n);
  std::string packed;
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int nib = 0;
    for (std::size_t k = 0; k < 4; ++k)
      nib = 2 * nib + (i + k < bits.size() && bits[i + k] == '1');
    packed.push_back("0123456789abcdef"[nib]);
  }
  return "v" + std::to_string(c.n) + "e" + std::to_string(g.num_edges()) + ":" + packed;
}

inline std::uint64_t automorphism_count(const Graph& g) {
  return automorphism_count(ColoredGraph::of(g));
}

inline bool isomorphic(const Graph& a, const Graph& b) {
  return a.num_vertices() == b.num_vertices() && a.num_edges() == b.num_edges() &&
         canonical_form(a) == canonical_form(b);
}

}  // namespace sharpf
