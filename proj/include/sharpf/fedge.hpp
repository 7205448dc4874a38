#pragma once

#include "errors.hpp"
#include "graph.hpp"
#include "pattern.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <compare>
#include <string>
#include <vector>

namespace sharpf {

// A copy of F: identity is the vertex set plus edge set; the embedding is the
// lexicographically smallest one producing that copy.
struct FEdge {
  std::vector<Vertex> embedding;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  friend bool operator==(const FEdge& a, const FEdge& b) {
    return a.vertices == b.vertices && a.edges == b.edges;
  }
  friend std::strong_ordering operator<=>(const FEdge& a, const FEdge& b) {
    if (auto c = a.vertices <=> b.vertices; c != 0) return c;
    return a.edges <=> b.edges;
  }

  bool has_vertex(Vertex x) const { return std::binary_search(vertices.begin(), vertices.end(), x); }
  bool has_edge(const Edge& e) const { return std::binary_search(edges.begin(), edges.end(), e); }
};

inline FEdge make_fedge(const Pattern& f, const std::vector<Vertex>& embedding) {
  if (static_cast<int>(embedding.size()) != f.r) throw DomainError("embedding has wrong length");
  std::vector<Vertex> best = embedding;
  for (const auto& sigma : f.automorphisms) {
    std::vector<Vertex> cand(embedding.size());
    for (int i = 0; i < f.r; ++i) cand[i] = embedding[sigma[i]];
    if (cand < best) best = std::move(cand);
  }
  FEdge e;
  e.embedding = std::move(best);
  e.vertices = e.embedding;
  std::sort(e.vertices.begin(), e.vertices.end());
  if (std::adjacent_find(e.vertices.begin(), e.vertices.end()) != e.vertices.end())
    throw DomainError("embedding is not injective");
  for (const auto& pe : f.graph.edges()) e.edges.push_back(make_edge(e.embedding[pe.u], e.embedding[pe.v]));
  std::sort(e.edges.begin(), e.edges.end());
  return e;
}

inline int overlap_size(const FEdge& a, const FEdge& b) {
  int k = 0;
  auto i = a.vertices.begin();
  auto j = b.vertices.begin();
  while (i != a.vertices.end() && j != b.vertices.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++k;
      ++i;
      ++j;
    }
  }
  return k;
}

inline std::vector<Vertex> overlap(const FEdge& a, const FEdge& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(),
                        std::back_inserter(out));
  return out;
}

class FGraph {
 public:
  FGraph() = default;
  explicit FGraph(int n) : vertices_(Graph(n).vertices()) {}

  void add_vertex(Vertex x) {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), x);
    if (it == vertices_.end() || *it != x) vertices_.insert(it, x);
  }

  // Returns false when the copy was already present.
  bool add_fedge(FEdge e) {
    auto it = std::lower_bound(fedges_.begin(), fedges_.end(), e);
    if (it != fedges_.end() && *it == e) return false;
    for (Vertex x : e.vertices) add_vertex(x);
    fedges_.insert(it, std::move(e));
    return true;
  }

  bool remove_fedge(const FEdge& e) {
    auto it = std::lower_bound(fedges_.begin(), fedges_.end(), e);
    if (it == fedges_.end() || *it != e) return false;
    fedges_.erase(it);
    return true;
  }

  bool contains(const FEdge& e) const { return std::binary_search(fedges_.begin(), fedges_.end(), e); }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<FEdge>& fedges() const { return fedges_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_fedges() const { return static_cast<int>(fedges_.size()); }

  // Sub-F-graph on the chosen F-edges; vertices are those they cover.
  FGraph select(const std::vector<int>& idx) const {
    FGraph h;
    for (int i : idx) h.add_fedge(fedges_[i]);
    return h;
  }

  static FGraph of(std::vector<FEdge> es) {
    FGraph h;
    for (auto& e : es) h.add_fedge(std::move(e));
    return h;
  }

  friend bool operator==(const FGraph&, const FGraph&) = default;

 private:
  std::vector<Vertex> vertices_;
  std::vector<FEdge> fedges_;
};

inline nlohmann::json fgraph_to_json(const FGraph& h, const Pattern& f, long long n) {
  nlohmann::json j;
  j["n"] = n;
  j["pattern_name"] = f.name;
  j["fedges"] = nlohmann::json::array();
  for (const auto& e : h.fedges()) j["fedges"].push_back(e.embedding);
  return j;
}

inline FGraph fgraph_from_json(const nlohmann::json& j, const Pattern& f) {
  if (!j.contains("n") || !j.contains("fedges")) throw ParseError("F-graph JSON needs n and fedges");
  if (j.contains("pattern_name") && j["pattern_name"].get<std::string>() != f.name)
    throw ParseError("F-graph JSON is for pattern '" + j["pattern_name"].get<std::string>() + "'");
  int n = j["n"].get<int>();
  FGraph h(n);
  for (const auto& emb : j["fedges"]) {
    auto e = make_fedge(f, emb.get<std::vector<Vertex>>());
    if (e.vertices.back() >= n || e.vertices.front() < 0) throw ParseError("F-edge vertex outside [n]");
    h.add_fedge(std::move(e));
  }
  return h;
}

inline std::string describe(const FEdge& e) {
  std::string s = "[";
  for (std::size_t i = 0; i < e.embedding.size(); ++i) s += (i ? "," : "") + std::to_string(e.embedding[i]);
  return s + "]";
}

inline std::string describe(const FGraph& h) {
  std::string s = "{";
  for (std::size_t i = 0; i < h.fedges().size(); ++i) s += (i ? " " : "") + describe(h.fedges()[i]);
  return s + "}";
}

}  // namespace sharpf
