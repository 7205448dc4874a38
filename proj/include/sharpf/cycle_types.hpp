#pragma once

#include "canon.hpp"
#include "errors.hpp"
#include "fedge.hpp"
#include "fgraph.hpp"
#include "pattern.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace sharpf {

// One isomorphism type of clean F-cycle, realized on vertices 0..v-1.
struct CycleType {
  FGraph shape;
  int k = 0;
  bool sparse = false;
  int v = 0;
  std::uint64_t aut = 0;
  std::string signature;
  std::string canonical;
};

inline bool operator<(const CycleType& a, const CycleType& b) {
  return std::tie(a.k, a.sparse, a.signature) < std::tie(b.k, b.sparse, b.signature);
}

// Orbit representatives of ordered vertex pairs (a, b), a != b, under Aut(F).
inline std::vector<std::pair<int, int>> ordered_pair_orbits(const Pattern& f) {
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> reps;
  for (int a = 0; a < f.r; ++a)
    for (int b = 0; b < f.r; ++b) {
      if (a == b || seen.count({a, b})) continue;
      reps.emplace_back(a, b);
      for (const auto& g : f.automorphisms) seen.insert({g[a], g[b]});
    }
  return reps;
}

inline std::string pair_tag(const Pattern& f, int a, int b) {
  return std::to_string(a) + "-" + std::to_string(b) + (f.graph.has_edge(a, b) ? "e" : "n");
}

// Every isomorphism type of clean F-cycle with length 2..max_len.
inline std::vector<CycleType> enumerate_cycle_types(const Pattern& f, int max_len) {
  if (max_len < 2) throw DomainError("max_len must be at least 2");
  std::map<std::string, CycleType> types;
  auto record = [&](FGraph shape, int k, std::string sig) {
    auto cc = classify(shape);
    if (cc.kind != CycleKind::clean_cycle || cc.length != k)
      throw InternalInconsistency("generated cycle fails classification: " + describe(shape));
    std::string key = fgraph_canonical_form(shape);
    if (types.count(key)) return;
    CycleType t;
    t.k = k;
    t.sparse = cc.sparse;
    t.v = shape.num_vertices();
    t.aut = fgraph_automorphisms(shape);
    t.signature = std::move(sig);
    t.canonical = key;
    t.shape = std::move(shape);
    types.emplace(key, std::move(t));
  };

  int r = f.r;
  std::vector<int> ident(static_cast<std::size_t>(r));
  std::iota(ident.begin(), ident.end(), 0);
  if (r >= 3) {
    FEdge a = make_fedge(f, ident);
    for (int x = 0; x < r; ++x)
      for (int y = 0; y < r; ++y) {
        if (x == y) continue;
        for (int u = 0; u < r; ++u)
          for (int w = u + 1; w < r; ++w) {
            std::vector<Vertex> emb(static_cast<std::size_t>(r));
            int fresh = r;
            for (int i = 0; i < r; ++i) emb[i] = i == x ? u : i == y ? w : fresh++;
            FGraph shape = FGraph::of({a, make_fedge(f, emb)});
            record(std::move(shape), 2, pair_tag(f, u, w) + "|" + pair_tag(f, x, y));
          }
      }
  }

  auto reps = ordered_pair_orbits(f);
  for (int k = 3; k <= max_len; ++k) {
    std::vector<int> choice(static_cast<std::size_t>(k), 0);
    while (true) {
      // Overlap vertices are 0..k-1; copy i joins o_{i-1} and o_i.
      std::vector<FEdge> es;
      std::string sig;
      int fresh = k;
      for (int i = 0; i < k; ++i) {
        auto [a, b] = reps[choice[i]];
        std::vector<Vertex> emb(static_cast<std::size_t>(r));
        for (int j = 0; j < r; ++j) emb[j] = j == a ? (i + k - 1) % k : j == b ? i : fresh++;
        es.push_back(make_fedge(f, emb));
        sig += (i ? "|" : "") + pair_tag(f, a, b);
      }
      record(FGraph::of(es), k, sig);
      int pos = 0;
      while (pos < k && ++choice[pos] == static_cast<int>(reps.size())) choice[pos++] = 0;
      if (pos == k) break;
    }
  }
  std::vector<CycleType> out;
  for (auto& [key, t] : types) out.push_back(std::move(t));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sharpf
