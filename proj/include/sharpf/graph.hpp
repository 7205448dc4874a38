#pragma once

#include "errors.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace sharpf {

using Vertex = int;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Vertex a, Vertex b) {
  if (a == b) throw DomainError("self-loop at vertex " + std::to_string(a));
  if (a < 0 || b < 0) throw DomainError("negative vertex label");
  return a < b ? Edge{a, b} : Edge{b, a};
}

class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) {
    vertices_.resize(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(vertices_.begin(), vertices_.end(), 0);
  }

  Graph(std::vector<Vertex> vertices, std::vector<Edge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (auto& e : edges_) {
      e = make_edge(e.u, e.v);
      vertices_.push_back(e.u);
      vertices_.push_back(e.v);
    }
    for (Vertex x : vertices_)
      if (x < 0) throw DomainError("negative vertex label");
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  static Graph from_pairs(std::initializer_list<std::pair<Vertex, Vertex>> pairs) {
    std::vector<Edge> es;
    for (auto [a, b] : pairs) es.push_back(make_edge(a, b));
    return Graph({}, std::move(es));
  }

  // Builds from already sorted, deduplicated, validated data.
  static Graph from_sorted(std::vector<Vertex> vertices, std::vector<Edge> edges) {
    Graph g;
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(edges);
    return g;
  }

  void add_vertex(Vertex x) {
    if (x < 0) throw DomainError("negative vertex label");
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), x);
    if (it == vertices_.end() || *it != x) vertices_.insert(it, x);
  }

  void add_edge(Vertex a, Vertex b) {
    Edge e = make_edge(a, b);
    add_vertex(a);
    add_vertex(b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) edges_.insert(it, e);
  }

  bool has_vertex(Vertex x) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), x);
  }
  bool has_edge(Vertex a, Vertex b) const {
    if (a == b) return false;
    return std::binary_search(edges_.begin(), edges_.end(), a < b ? Edge{a, b} : Edge{b, a});
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  int index_of(Vertex x) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), x);
    if (it == vertices_.end() || *it != x) return -1;
    return static_cast<int>(it - vertices_.begin());
  }

  Graph induced(std::vector<Vertex> keep) const {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<Edge> es;
    for (const auto& e : edges_)
      if (std::binary_search(keep.begin(), keep.end(), e.u) &&
          std::binary_search(keep.begin(), keep.end(), e.v))
        es.push_back(e);
    std::vector<Vertex> vs;
    for (Vertex x : keep)
      if (has_vertex(x)) vs.push_back(x);
    return from_sorted(std::move(vs), std::move(es));
  }

  // Subgraph spanned by an edge subset: vertices are the endpoints.
  static Graph of_edges(std::vector<Edge> es) { return Graph({}, std::move(es)); }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

// Index-based view with adjacency lists and a bit matrix.
struct DenseGraph {
  std::vector<Vertex> labels;
  std::vector<std::vector<int>> adj;
  std::vector<std::uint64_t> bits;
  int words = 0;

  int size() const { return static_cast<int>(labels.size()); }
  bool has(int i, int j) const {
    return (bits[static_cast<std::size_t>(i) * words + (j >> 6)] >> (j & 63)) & 1U;
  }
  const std::uint64_t* row(int i) const { return bits.data() + static_cast<std::size_t>(i) * words; }

  static DenseGraph of(const Graph& g) {
    DenseGraph d;
    d.labels = g.vertices();
    int n = d.size();
    d.words = std::max(1, (n + 63) / 64);
    d.adj.assign(static_cast<std::size_t>(n), {});
    d.bits.assign(static_cast<std::size_t>(n) * d.words, 0);
    for (const auto& e : g.edges()) {
      int a = g.index_of(e.u), b = g.index_of(e.v);
      d.adj[a].push_back(b);
      d.adj[b].push_back(a);
      d.bits[static_cast<std::size_t>(a) * d.words + (b >> 6)] |= std::uint64_t{1} << (b & 63);
      d.bits[static_cast<std::size_t>(b) * d.words + (a >> 6)] |= std::uint64_t{1} << (a & 63);
    }
    for (auto& l : d.adj) std::sort(l.begin(), l.end());
    return d;
  }
};

struct Components {
  int count = 0;
  std::vector<std::vector<Vertex>> parts;
};

inline Components components(const Graph& g) {
  int n = g.num_vertices();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    int a = find(g.index_of(e.u)), b = find(g.index_of(e.v));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  Components c;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int root = find(i);
    if (slot[root] < 0) {
      slot[root] = c.count++;
      c.parts.emplace_back();
    }
    c.parts[slot[root]].push_back(g.vertices()[i]);
  }
  return c;
}

inline bool is_connected(const Graph& g) { return components(g).count == 1; }

inline std::string describe(const Graph& g) {
  std::string s = "V={";
  for (std::size_t i = 0; i < g.vertices().size(); ++i)
    s += (i ? "," : "") + std::to_string(g.vertices()[i]);
  s += "} E={";
  for (std::size_t i = 0; i < g.edges().size(); ++i)
    s += (i ? "," : "") + std::to_string(g.edges()[i].u) + "-" + std::to_string(g.edges()[i].v);
  return s + "}";
}

// Named small graphs.
inline Graph complete_graph(int n) {
  Graph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.add_edge(a, b);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g(n);
  for (int a = 0; a < n; ++a) g.add_edge(a, (a + 1) % n);
  return g;
}

inline Graph path_graph(int n) {
  Graph g(n);
  for (int a = 0; a + 1 < n; ++a) g.add_edge(a, a + 1);
  return g;
}

}  // namespace sharpf
