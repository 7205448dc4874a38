#pragma once

// Brute-force reference implementations used only by tests.

#include "sharpf/graph.hpp"
#include "sharpf/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using sharpf::Graph;
using sharpf::Vertex;

inline std::uint64_t brute_automorphisms(const Graph& g) {
  const auto& vs = g.vertices();
  std::vector<int> perm(vs.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (const auto& e : g.edges()) {
      Vertex a = vs[perm[g.index_of(e.u)]], b = vs[perm[g.index_of(e.v)]];
      if (!g.has_edge(a, b)) {
        ok = false;
        break;
      }
    }
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

inline bool brute_isomorphic(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  std::vector<int> perm(a.vertices().size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (const auto& e : a.edges()) {
      if (!b.has_edge(b.vertices()[perm[a.index_of(e.u)]], b.vertices()[perm[a.index_of(e.v)]])) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// All labeled graphs on 0..n-1.
inline std::vector<Graph> all_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  std::vector<Graph> out;
  for (std::uint32_t mask = 0; mask < (1U << pairs.size()); ++mask) {
    Graph g(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1U) g.add_edge(pairs[i].first, pairs[i].second);
    out.push_back(std::move(g));
  }
  return out;
}

inline Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) g.add_edge(a, b);
  return g;
}

// True when the vertex set `set` of g spans a (not necessarily induced) copy of pattern f on 0..r-1.
inline bool spans_copy(const Graph& g, const Graph& f, const std::vector<Vertex>& set) {
  std::vector<int> perm(set.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (const auto& e : f.edges())
      if (!g.has_edge(set[perm[e.u]], set[perm[e.v]])) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Exhaustive F-factor existence: branch on the lowest uncovered vertex.
inline bool brute_has_factor(const Graph& g, const Graph& f) {
  int r = f.num_vertices();
  int n = g.num_vertices();
  if (n % r != 0) return false;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  const auto& vs = g.vertices();
  auto rec = [&](auto&& self) -> bool {
    int first = -1;
    for (int i = 0; i < n; ++i)
      if (!used[i]) {
        first = i;
        break;
      }
    if (first < 0) return true;
    std::vector<int> rest;
    for (int i = first + 1; i < n; ++i)
      if (!used[i]) rest.push_back(i);
    if (static_cast<int>(rest.size()) < r - 1) return false;
    std::vector<char> pick(rest.size(), 0);
    std::fill(pick.end() - (r - 1), pick.end(), 1);
    do {
      std::vector<Vertex> set{vs[first]};
      std::vector<int> idx{first};
      for (std::size_t k = 0; k < rest.size(); ++k)
        if (pick[k]) {
          set.push_back(vs[rest[k]]);
          idx.push_back(rest[k]);
        }
      if (!spans_copy(g, f, set)) continue;
      for (int i : idx) used[i] = 1;
      bool ok = self(self);
      for (int i : idx) used[i] = 0;
      if (ok) return true;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return false;
  };
  return rec(rec);
}

}  // namespace oracle
