#pragma once

#include "../copies.hpp"
#include "../errors.hpp"
#include "../sampler.hpp"
#include "inventory.hpp"

#include <cmath>
#include <cstdint>
#include <list>
#include <map>
#include <unordered_map>
#include <vector>

namespace sharpf {

inline constexpr int kExactLog2Cap = 24;

// Set of inventory placements as packed words.
using CycleSet = std::vector<std::uint64_t>;

struct CycleSetHash {
  std::size_t operator()(const CycleSet& s) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (auto w : s) h = splitmix64(h ^ w);
    return static_cast<std::size_t>(h);
  }
};

inline bool test_bit(const CycleSet& s, int i) { return s[i >> 6] >> (i & 63) & 1U; }
inline void set_bit(CycleSet& s, int i) { s[i >> 6] |= std::uint64_t{1} << (i & 63); }

// Full enumeration of H_F(n, pi) over its F-edges and of G*(n, p) over its
// pairs; dummy edges are summed out since each belongs to one sparse cycle.
// F-edge i of the canonical copy order sits at bit M-1-i of an H state so that
// decided prefixes F_1..F_{j-1} are aligned subtrees.
class ExactModel {
 public:
  ExactModel(const Pattern& f, int n, double pi, double p, int log2_cap = kExactLog2Cap)
      : f_(&f), n_(n), pi_(pi), p_(p), index_(f, n) {
    if (index_.size() > static_cast<std::uint64_t>(log2_cap))
      throw CapExceeded("exact mode needs at most 2^" + std::to_string(log2_cap) + " F-edge states");
    M_ = static_cast<int>(index_.size());
    E_ = n * (n - 1) / 2;
    if (E_ > log2_cap) throw CapExceeded("exact mode needs at most 2^" + std::to_string(log2_cap) + " pair states");
    if (n >= 2 * (f.r - 1)) inv_ = build_inventory(f, n);
    else inv_.n = n, inv_.s = f.s, inv_.pattern = f.name;
    P_ = inv_.size();
    W_ = (P_ + 63) / 64 + 1;
    for (int i = 0; i < M_; ++i) {
      FEdge e = index_.copy(i);
      std::uint32_t pm = 0;
      for (const auto& ed : e.edges) pm |= 1U << pair_index(n, ed.u, ed.v);
      fedge_pairs_.push_back(pm);
      fedges_.push_back(std::move(e));
    }
    for (const auto& it : inv_.items) {
      placement_of_.emplace(it.cycle.fedges(), static_cast<int>(place_fedges_.size()));
      std::uint32_t fm = 0, pm = 0;
      for (const auto& e : it.cycle.fedges()) fm |= 1U << index_.index_of(e);
      for (const auto& ed : it.dgraph.base.edges()) pm |= 1U << pair_index(n, ed.u, ed.v);
      place_fedges_.push_back(fm);
      place_pairs_.push_back(pm);
    }
    build_h();
    build_g();
  }

  const Pattern& pattern() const { return *f_; }
  int n() const { return n_; }
  int num_fedges() const { return M_; }
  int num_pairs() const { return E_; }
  double pi() const { return pi_; }
  double p() const { return p_; }
  const CycleInventory& inventory() const { return inv_; }
  const FEdge& fedge(int i) const { return fedges_[i]; }
  std::uint32_t fedge_pairs(int i) const { return fedge_pairs_[i]; }
  std::uint32_t placement_fedges(int c) const { return place_fedges_[c]; }
  std::uint32_t placement_pairs(int c) const { return place_pairs_[c]; }
  int placement_of(const std::vector<FEdge>& key) const {
    auto it = placement_of_.find(key);
    if (it == placement_of_.end()) throw DomainError("not a placement of the inventory");
    return it->second;
  }
  CycleSet empty_set() const { return CycleSet(static_cast<std::size_t>(W_), 0); }
  int num_cycle_sets() const { return static_cast<int>(sets_.size()); }

  // H state with F_1 as the most significant bit.
  std::uint32_t h_bit(int i) const { return 1U << (M_ - 1 - i); }

  CycleSet h_cycles(std::uint32_t eta) const { return sets_[h_id_[eta]]; }
  int h_id(std::uint32_t eta) const { return static_cast<int>(h_id_[eta]); }
  const CycleSet& set_of(int id) const { return sets_[id]; }

  // Law of the clean-cycle set of H.
  double p2(const CycleSet& c) const {
    auto it = id_of_.find(c);
    return it == id_of_.end() ? 0.0 : p2_[it->second];
  }

  // Law of the clean d-cycle set of G*.
  double p1(const CycleSet& c) {
    auto it = p1_memo_.find(c);
    if (it != p1_memo_.end()) return it->second;
    CycleSet want_dense = c, want_sparse = c;
    int need_sparse = 0;
    for (int i = 0; i < P_; ++i) {
      if (!test_bit(c, i)) continue;
      if (inv_.items[i].sparse) {
        want_dense[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        ++need_sparse;
      } else {
        want_sparse[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
      }
    }
    long double total = 0;
    for (std::uint32_t w = 0; w < (1U << E_); ++w) {
      const std::uint64_t* d = &dense_[static_cast<std::size_t>(w) * W_];
      const std::uint64_t* s = &sparse_[static_cast<std::size_t>(w) * W_];
      bool ok = true;
      int avail = 0;
      for (int k = 0; k < W_ && ok; ++k) {
        if (d[k] != want_dense[k] || (want_sparse[k] & ~s[k])) ok = false;
        avail += __builtin_popcountll(s[k]);
      }
      if (!ok) continue;
      total += omega_prob(w) * std::pow(static_cast<long double>(p_), need_sparse) *
               std::pow(1.0L - p_, avail - need_sparse);
    }
    return p1_memo_[c] = static_cast<double>(total);
  }

  // Exact total variation distance between the two cycle-set laws.
  double total_variation() {
    long double tv = 0;
    for (int id = 0; id < static_cast<int>(sets_.size()); ++id)
      tv += std::max(0.0L, static_cast<long double>(p2_[id]) - p1(sets_[id]));
    return static_cast<double>(tv);
  }

  // P(F_j in H | F_1..F_{j-1} decided as in `prefix`, cycle set = c), j 1-based.
  double pi_prime(const CycleSet& c, std::uint32_t prefix, int j) {
    const auto& tree = h_tree(c);
    std::size_t node = (std::size_t{1} << (j - 1)) | prefix;
    if (tree[node] <= 0) throw InternalInconsistency("conditioning event for H has probability zero");
    return tree[2 * node + 1] / tree[node];
  }

  double h_condition_mass(const CycleSet& c, std::uint32_t prefix, int decided) {
    const auto& tree = h_tree(c);
    return tree[(std::size_t{1} << decided) | prefix];
  }

  // P(all pairs of F_j present | R present, no F_i (i in excluded) fully present,
  // clean d-cycle set = c).
  double pi_g(const CycleSet& c, std::uint32_t r_pairs, std::uint32_t excluded, int j) {
    const auto& base = g_weights(c);
    std::uint32_t free = ((1U << E_) - 1) & ~r_pairs;
    std::uint32_t need = fedge_pairs_[j];
    long double num = 0, den = 0;
    for (std::uint32_t s = free;; s = (s - 1) & free) {
      std::uint32_t w = r_pairs | s;
      if (!(g_fedges_[w] & excluded)) {
        den += base[w];
        if ((w & need) == need) num += base[w];
      }
      if (s == 0) break;
    }
    if (den <= 0) throw InternalInconsistency("conditioning event for G* has probability zero");
    return static_cast<double>(num / den);
  }

  // Draw the pair state of G* from its conditional law given the same information.
  std::uint32_t sample_pairs(const CycleSet& c, std::uint32_t r_pairs, std::uint32_t excluded, double u) {
    const auto& base = g_weights(c);
    std::uint32_t free = ((1U << E_) - 1) & ~r_pairs;
    long double den = 0;
    for (std::uint32_t s = free;; s = (s - 1) & free) {
      std::uint32_t w = r_pairs | s;
      if (!(g_fedges_[w] & excluded)) den += base[w];
      if (s == 0) break;
    }
    long double target = static_cast<long double>(u) * den, acc = 0;
    std::uint32_t last = r_pairs;
    for (std::uint32_t s = free;; s = (s - 1) & free) {
      std::uint32_t w = r_pairs | s;
      if (!(g_fedges_[w] & excluded) && base[w] > 0) {
        acc += base[w];
        last = w;
        if (acc > target) return w;
      }
      if (s == 0) break;
    }
    return last;
  }

  // Clean d-cycle set of one unconditioned draw of G*, using draws from `rng`.
  CycleSet sample_g_cycles(CounterRng& rng) const {
    std::uint32_t w = 0;
    for (int e = 0; e < E_; ++e)
      if (rng.bernoulli(p_)) w |= 1U << e;
    CycleSet out(&dense_[static_cast<std::size_t>(w) * W_], &dense_[static_cast<std::size_t>(w) * W_] + W_);
    for (int c = 0; c < P_; ++c)
      if (sparse_base_present(w, c) && rng.bernoulli(p_)) set_bit(out, c);
    return out;
  }

  // Clean-cycle set of one unconditioned draw of H.
  CycleSet sample_h_cycles(CounterRng& rng) const {
    std::uint32_t eta = 0;
    for (int i = 0; i < M_; ++i)
      if (rng.bernoulli(pi_)) eta |= h_bit(i);
    return h_cycles(eta);
  }

  // F-edges (bit i for F-edge i) fully present in a pair state.
  std::uint32_t fedges_in(std::uint32_t omega) const { return g_fedges_[omega]; }
  bool sparse_base_present(std::uint32_t omega, int c) const {
    return test_bit_raw(&sparse_[static_cast<std::size_t>(omega) * W_], c);
  }

 private:
  static bool test_bit_raw(const std::uint64_t* s, int i) { return s[i >> 6] >> (i & 63) & 1U; }

  long double omega_prob(std::uint32_t w) const {
    int k = __builtin_popcount(w);
    return std::pow(static_cast<long double>(p_), k) * std::pow(1.0L - p_, E_ - k);
  }

  void build_h() {
    std::size_t states = std::size_t{1} << M_;
    h_id_.assign(states, 0);
    std::vector<long double> mass;
    for (std::size_t eta = 0; eta < states; ++eta) {
      CycleSet s = empty_set();
      std::uint32_t normal = 0;
      for (int i = 0; i < M_; ++i)
        if (eta & h_bit(i)) normal |= 1U << i;
      for (int c = 0; c < P_; ++c)
        if ((normal & place_fedges_[c]) == place_fedges_[c]) set_bit(s, c);
      auto [it, fresh] = id_of_.emplace(s, static_cast<std::uint32_t>(sets_.size()));
      if (fresh) {
        sets_.push_back(s);
        mass.push_back(0);
      }
      h_id_[eta] = it->second;
      int k = __builtin_popcount(static_cast<std::uint32_t>(eta));
      mass[it->second] += std::pow(static_cast<long double>(pi_), k) * std::pow(1.0L - pi_, M_ - k);
    }
    for (auto m : mass) p2_.push_back(static_cast<double>(m));
  }

  void build_g() {
    std::size_t states = std::size_t{1} << E_;
    dense_.assign(states * W_, 0);
    sparse_.assign(states * W_, 0);
    g_fedges_.assign(states, 0);
    for (std::size_t w = 0; w < states; ++w) {
      std::uint32_t fm = 0;
      for (int i = 0; i < M_; ++i)
        if ((w & fedge_pairs_[i]) == fedge_pairs_[i]) fm |= 1U << i;
      g_fedges_[w] = fm;
      for (int c = 0; c < P_; ++c) {
        if ((w & place_pairs_[c]) != place_pairs_[c]) continue;
        auto& dst = inv_.items[c].sparse ? sparse_ : dense_;
        dst[w * W_ + (c >> 6)] |= std::uint64_t{1} << (c & 63);
      }
    }
  }

  const std::vector<double>& h_tree(const CycleSet& c) {
    auto hit = h_trees_.find(c);
    if (hit != h_trees_.end()) return hit->second;
    if (h_trees_.size() >= kTreeCache) {
      h_trees_.erase(tree_order_.front());
      tree_order_.pop_front();
    }
    auto it = id_of_.find(c);
    std::size_t states = std::size_t{1} << M_;
    std::vector<double> tree(2 * states, 0);
    if (it != id_of_.end())
      for (std::size_t eta = 0; eta < states; ++eta)
        if (h_id_[eta] == it->second) {
          int k = __builtin_popcount(static_cast<std::uint32_t>(eta));
          tree[states + eta] = std::pow(pi_, k) * std::pow(1.0 - pi_, M_ - k);
        }
    for (std::size_t i = states - 1; i >= 1; --i) tree[i] = tree[2 * i] + tree[2 * i + 1];
    tree_order_.push_back(c);
    return h_trees_[c] = std::move(tree);
  }

  // Pair-state weights under "clean d-cycle set = c": no dense cycle outside c
  // fully present, each sparse cycle outside c with its pairs present loses its
  // dummy (factor 1 - p). Cycles in c are enforced through R by the caller.
  const std::vector<long double>& g_weights(const CycleSet& c) {
    auto hit = g_weights_.find(c);
    if (hit != g_weights_.end()) return hit->second;
    if (g_weights_.size() >= kTreeCache) {
      g_weights_.erase(weight_order_.front());
      weight_order_.pop_front();
    }
    std::size_t states = std::size_t{1} << E_;
    std::vector<long double> wts(states, 0);
    for (std::size_t w = 0; w < states; ++w) {
      const std::uint64_t* d = &dense_[w * W_];
      const std::uint64_t* s = &sparse_[w * W_];
      bool ok = true;
      int lost = 0;
      for (int k = 0; k < W_; ++k) {
        if (d[k] & ~c[k]) ok = false;
        lost += __builtin_popcountll(s[k] & ~c[k]);
      }
      if (ok) wts[w] = omega_prob(static_cast<std::uint32_t>(w)) * std::pow(1.0L - p_, lost);
    }
    weight_order_.push_back(c);
    return g_weights_[c] = std::move(wts);
  }

  static constexpr std::size_t kTreeCache = 4;

  const Pattern* f_;
  int n_;
  double pi_, p_;
  CopyIndex index_;
  CycleInventory inv_;
  int M_ = 0, E_ = 0, P_ = 0, W_ = 1;
  std::vector<FEdge> fedges_;
  std::map<std::vector<FEdge>, int> placement_of_;
  std::vector<std::uint32_t> fedge_pairs_, place_fedges_, place_pairs_;
  std::vector<std::uint32_t> h_id_;
  std::vector<CycleSet> sets_;
  std::unordered_map<CycleSet, std::uint32_t, CycleSetHash> id_of_;
  std::vector<double> p2_;
  std::vector<std::uint64_t> dense_, sparse_;
  std::vector<std::uint32_t> g_fedges_;
  std::unordered_map<CycleSet, double, CycleSetHash> p1_memo_;
  std::unordered_map<CycleSet, std::vector<double>, CycleSetHash> h_trees_;
  std::unordered_map<CycleSet, std::vector<long double>, CycleSetHash> g_weights_;
  std::list<CycleSet> tree_order_, weight_order_;
};

}  // namespace sharpf
