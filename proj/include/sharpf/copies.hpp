#pragma once

#include "errors.hpp"
#include "fedge.hpp"
#include "graph.hpp"
#include "pattern.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace sharpf {

// The r!/aut(F) distinct copies of F on positions 0..r-1, in lexicographic
// order of their smallest embeddings.
struct CopyTemplates {
  int r = 0;
  std::vector<std::vector<int>> embeddings;
  std::vector<std::uint64_t> masks;  // edge masks over position pairs
  std::unordered_map<std::uint64_t, int> by_mask;

  static int pair_bit(int r, int a, int b) {
    if (a > b) std::swap(a, b);
    return a * r - a * (a + 1) / 2 + (b - a - 1);
  }

  explicit CopyTemplates(const Pattern& f) : r(f.r) {
    if (r * (r - 1) / 2 > 64) throw ResourceLimitError("pattern too large for copy templates");
    std::vector<int> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::uint64_t mask = 0;
      for (const auto& e : f.graph.edges()) mask |= std::uint64_t{1} << pair_bit(r, perm[e.u], perm[e.v]);
      if (by_mask.emplace(mask, static_cast<int>(masks.size())).second) {
        masks.push_back(mask);
        embeddings.push_back(perm);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  int size() const { return static_cast<int>(masks.size()); }
};

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
  if (x > UINT64_MAX) throw ResourceLimitError("count overflows 64 bits");
  return static_cast<std::uint64_t>(x);
}

inline std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 v = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    v = v * (n - k + i) / i;
    if (v > UINT64_MAX) throw ResourceLimitError("binomial overflows 64 bits");
  }
  return static_cast<std::uint64_t>(v);
}

// Lexicographic ranking of r-subsets of [n].
class SubsetRanker {
 public:
  SubsetRanker(int n, int r) : n_(n), r_(r), table_(static_cast<std::size_t>(n + 1) * (r + 1), 0) {
    for (int x = 0; x <= n; ++x)
      for (int k = 0; k <= r; ++k) table_[static_cast<std::size_t>(x) * (r + 1) + k] = binom_u64(x, k);
  }

  std::uint64_t binom(int x, int k) const {
    if (x < 0 || k < 0 || k > r_) return 0;
    return table_[static_cast<std::size_t>(x) * (r_ + 1) + k];
  }

  std::uint64_t count() const { return binom(n_, r_); }

  std::uint64_t rank(const std::vector<Vertex>& sorted) const {
    std::uint64_t rk = 0;
    int prev = -1;
    for (int i = 0; i < r_; ++i) {
      for (int x = prev + 1; x < sorted[i]; ++x) rk += binom(n_ - 1 - x, r_ - 1 - i);
      prev = sorted[i];
    }
    return rk;
  }

  std::vector<Vertex> unrank(std::uint64_t rk) const {
    std::vector<Vertex> out;
    int x = 0;
    for (int i = 0; i < r_; ++i) {
      while (true) {
        std::uint64_t block = binom(n_ - 1 - x, r_ - 1 - i);
        if (rk < block) break;
        rk -= block;
        ++x;
      }
      out.push_back(x++);
    }
    return out;
  }

  // Calls fn(subset) for every r-subset in lexicographic order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    if (r_ > n_) return;
    std::vector<Vertex> c(static_cast<std::size_t>(r_));
    std::iota(c.begin(), c.end(), 0);
    while (true) {
      fn(static_cast<const std::vector<Vertex>&>(c));
      int i = r_ - 1;
      while (i >= 0 && c[i] == n_ - r_ + i) --i;
      if (i < 0) return;
      ++c[i];
      for (int j = i + 1; j < r_; ++j) c[j] = c[j - 1] + 1;
    }
  }

 private:
  int n_, r_;
  std::vector<std::uint64_t> table_;
};

// Fixed order F_1..F_M of all potential copies on [n]: vertex set in
// lexicographic order, then template order.
class CopyIndex {
 public:
  CopyIndex(const Pattern& f, int n) : f_(&f), n_(n), templates_(f), ranker_(n, f.r) {
    if (n < f.r) throw DomainError("copy index needs n >= r");
    total_ = checked_mul(ranker_.count(), static_cast<std::uint64_t>(templates_.size()));
  }

  std::uint64_t size() const { return total_; }
  int n() const { return n_; }
  const CopyTemplates& templates() const { return templates_; }
  const SubsetRanker& ranker() const { return ranker_; }

  std::uint64_t index_of(const FEdge& e) const {
    std::uint64_t mask = 0;
    for (const auto& ed : e.edges) {
      int a = static_cast<int>(std::lower_bound(e.vertices.begin(), e.vertices.end(), ed.u) - e.vertices.begin());
      int b = static_cast<int>(std::lower_bound(e.vertices.begin(), e.vertices.end(), ed.v) - e.vertices.begin());
      mask |= std::uint64_t{1} << CopyTemplates::pair_bit(f_->r, a, b);
    }
    auto it = templates_.by_mask.find(mask);
    if (it == templates_.by_mask.end()) throw DomainError("edge set is not a copy of the pattern");
    return ranker_.rank(e.vertices) * templates_.size() + it->second;
  }

  FEdge copy(std::uint64_t idx) const {
    std::vector<Vertex> vs = ranker_.unrank(idx / templates_.size());
    return copy_on(vs, static_cast<int>(idx % templates_.size()));
  }

  FEdge copy_on(const std::vector<Vertex>& sorted, int tmpl) const {
    FEdge e;
    const auto& emb = templates_.embeddings[tmpl];
    for (int i = 0; i < f_->r; ++i) e.embedding.push_back(sorted[emb[i]]);
    e.vertices = sorted;
    for (const auto& pe : f_->graph.edges()) e.edges.push_back(make_edge(e.embedding[pe.u], e.embedding[pe.v]));
    std::sort(e.edges.begin(), e.edges.end());
    return e;
  }

 private:
  const Pattern* f_;
  int n_;
  CopyTemplates templates_;
  SubsetRanker ranker_;
  std::uint64_t total_ = 0;
};

inline constexpr std::uint64_t kDefaultCopyCap = 10'000'000;

// All copies of F in g, by embedding search. Each copy is reported once, via
// its smallest embedding.
inline std::vector<FEdge> enumerate_copies(const Graph& g, const Pattern& f,
                                           std::uint64_t cap = kDefaultCopyCap) {
  std::vector<FEdge> out;
  if (g.num_vertices() < f.r) return out;
  DenseGraph host = DenseGraph::of(g);
  DenseGraph pat = DenseGraph::of(f.graph);
  int r = f.r;

  // Pattern vertex order: each next vertex maximizes links to those placed.
  std::vector<int> order;
  std::vector<char> placed(static_cast<std::size_t>(r), 0);
  for (int step = 0; step < r; ++step) {
    int best = -1, best_links = -1, best_deg = -1;
    for (int x = 0; x < r; ++x) {
      if (placed[x]) continue;
      int links = 0;
      for (int y : pat.adj[x]) links += placed[y];
      int deg = static_cast<int>(pat.adj[x].size());
      if (links > best_links || (links == best_links && deg > best_deg)) {
        best = x;
        best_links = links;
        best_deg = deg;
      }
    }
    placed[best] = 1;
    order.push_back(best);
  }

  std::vector<int> img(static_cast<std::size_t>(r), -1);
  std::vector<char> used(static_cast<std::size_t>(host.size()), 0);
  auto rec = [&](auto& self, int depth) -> void {
    if (depth == r) {
      // Keep only the smallest embedding of each copy.
      for (const auto& sigma : f.automorphisms) {
        bool smaller = false, decided = false;
        for (int i = 0; i < r && !decided; ++i) {
          int a = img[sigma[i]], b = img[i];
          if (a != b) {
            smaller = a < b;
            decided = true;
          }
        }
        if (smaller) return;
      }
      if (out.size() >= cap) throw ResourceLimitError("copy enumeration exceeded cap");
      FEdge e;
      for (int i = 0; i < r; ++i) e.embedding.push_back(host.labels[img[i]]);
      e.vertices = e.embedding;
      std::sort(e.vertices.begin(), e.vertices.end());
      for (const auto& pe : f.graph.edges()) e.edges.push_back(make_edge(e.embedding[pe.u], e.embedding[pe.v]));
      std::sort(e.edges.begin(), e.edges.end());
      out.push_back(std::move(e));
      return;
    }
    int x = order[depth];
    int need = static_cast<int>(pat.adj[x].size());
    // Candidates: neighbors of an already-mapped pattern neighbor, else all.
    int anchor = -1;
    for (int y : pat.adj[x])
      if (img[y] >= 0) {
        anchor = img[y];
        break;
      }
    auto try_vertex = [&](int c) {
      if (used[c] || static_cast<int>(host.adj[c].size()) < need) return;
      for (int y : pat.adj[x])
        if (img[y] >= 0 && !host.has(c, img[y])) return;
      used[c] = 1;
      img[x] = c;
      self(self, depth + 1);
      img[x] = -1;
      used[c] = 0;
    };
    if (anchor >= 0)
      for (int c : host.adj[anchor]) try_vertex(c);
    else
      for (int c = 0; c < host.size(); ++c) try_vertex(c);
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sharpf
