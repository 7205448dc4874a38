#pragma once

#include "copies.hpp"
#include "dgraph.hpp"
#include "errors.hpp"
#include "fedge.hpp"
#include "graph.hpp"
#include "pattern.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace sharpf {

struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream_id = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Object classes indexed by the counter-based generator.
enum class Draw : std::uint64_t {
  pair = 1,
  copy = 2,
  dummy = 3,
  placement = 4,
  coin = 5,
  decide = 6,
  coupling = 7,
  extra = 8,
};

inline std::uint64_t counter_bits(const Seed& s, Draw kind, std::uint64_t index) {
  std::uint64_t h = splitmix64(s.value ^ splitmix64(s.stream_id + 0x632BE59BD9B4E019ULL));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(kind) * 0xD6E8FEB86659FD93ULL));
  return splitmix64(h ^ index);
}

// Uniform on [0, 1) for one indexed object.
inline double counter_uniform(const Seed& s, Draw kind, std::uint64_t index) {
  return static_cast<double>(counter_bits(s, kind, index) >> 11) * 0x1.0p-53;
}

// Sequential view of one (seed, kind) counter.
class CounterRng {
 public:
  CounterRng(Seed s, Draw kind, std::uint64_t start = 0) : seed_(s), kind_(kind), next_(start) {}
  double uniform() { return counter_uniform(seed_, kind_, next_++); }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t used() const { return next_; }

 private:
  Seed seed_;
  Draw kind_;
  std::uint64_t next_;
};

// Pairs {a < b} of [n] in lexicographic order.
inline std::uint64_t pair_index(int n, int a, int b) {
  if (a > b) std::swap(a, b);
  return static_cast<std::uint64_t>(a) * (2 * n - a - 1) / 2 + (b - a - 1);
}

inline Graph sample_gnp(int n, double p, Seed seed) {
  if (!(p >= 0 && p <= 1)) throw DomainError("p must lie in [0,1]");
  std::vector<Edge> es;
  std::uint64_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++idx)
      if (counter_uniform(seed, Draw::pair, idx) < p) es.push_back({a, b});
  return Graph::from_sorted(Graph(n).vertices(), std::move(es));
}

inline FGraph sample_hf(int n, double pi, const Pattern& f, Seed seed) {
  if (!(pi >= 0 && pi <= 1)) throw DomainError("pi must lie in [0,1]");
  FGraph h(n);
  if (n < f.r) return h;
  CopyIndex index(f, n);
  for (std::uint64_t i = 0; i < index.size(); ++i)
    if (counter_uniform(seed, Draw::copy, i) < pi) h.add_fedge(index.copy(i));
  return h;
}

// Calls fn(i, j) with copy indices i < j for every sparse clean 2-cycle on [n].
inline void for_each_sparse_cycle(const CopyIndex& index, const Pattern& f,
                                  const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  int n = index.n();
  if (f.r < 3 || n < 2 * f.r - 2) return;
  const auto& tm = index.templates();
  std::vector<std::uint64_t> through;
  for (int u = 0; u < n; ++u)
    for (int w = u + 1; w < n; ++w) {
      // Copies using {u, w} as an edge.
      through.clear();
      SubsetRanker rest(n - 2, f.r - 2);
      rest.for_each([&](const std::vector<Vertex>& sub) {
        // Map the (n-2)-universe back to [n] minus {u, w}.
        std::vector<Vertex> vs;
        for (Vertex x : sub) {
          Vertex y = x;
          if (y >= u) ++y;
          if (y >= w) ++y;
          vs.push_back(y);
        }
        vs.push_back(u);
        vs.push_back(w);
        std::sort(vs.begin(), vs.end());
        int pu = static_cast<int>(std::lower_bound(vs.begin(), vs.end(), u) - vs.begin());
        int pw = static_cast<int>(std::lower_bound(vs.begin(), vs.end(), w) - vs.begin());
        std::uint64_t bit = std::uint64_t{1} << CopyTemplates::pair_bit(f.r, pu, pw);
        std::uint64_t base = index.ranker().rank(vs) * tm.size();
        for (int t = 0; t < tm.size(); ++t)
          if (tm.masks[t] & bit) through.push_back(base + t);
      });
      for (std::size_t x = 0; x < through.size(); ++x)
        for (std::size_t y = x + 1; y < through.size(); ++y) {
          FEdge a = index.copy(through[x]), b = index.copy(through[y]);
          if (overlap_size(a, b) == 2) fn(std::min(through[x], through[y]), std::max(through[x], through[y]));
        }
    }
}

inline DGraph sample_gstar(int n, double p, const Pattern& f, Seed seed) {
  DGraph g;
  g.base = sample_gnp(n, p, seed);
  if (n < f.r) return g;
  CopyIndex index(f, n);
  std::uint64_t m = index.size();
  for_each_sparse_cycle(index, f, [&](std::uint64_t i, std::uint64_t j) {
    if (counter_uniform(seed, Draw::dummy, i * m + j) < p) g.dummies.insert(DummyKey(index.copy(i), index.copy(j)));
  });
  return g;
}

inline std::set<std::vector<Vertex>> merge_to_hr(const FGraph& h) {
  std::set<std::vector<Vertex>> out;
  for (const auto& e : h.fedges()) out.insert(e.vertices);
  return out;
}

}  // namespace sharpf
