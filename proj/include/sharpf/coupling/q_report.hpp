#pragma once

#include "../fgraph.hpp"
#include "inventory.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sharpf {

enum class Tri : std::int8_t { undecided = 0, in = 1, out = 2 };

enum class Outcome { success, B1, B2, B3, step_failure };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::B1: return "B1";
    case Outcome::B2: return "B2";
    case Outcome::B3: return "B3";
    default: return "step_failure";
  }
}

using CycleKey = std::vector<FEdge>;

struct CouplingState {
  std::vector<FEdge> order;  // F_1..F_M
  int j = 1;
  std::vector<int> Y;       // mirrored inclusions (1-based steps)
  std::vector<int> Nprime;  // mirrored exclusions
  std::vector<FGraph> C1, C2;
  std::set<CycleKey> C1_keys, C2_keys;
  std::set<Edge> R;
  std::set<DummyKey> R_dummies;
  std::vector<Tri> decisions_H, decisions_G;
  FGraph H0;  // F-edges of Y and of C1
  FGraph H;   // every F-edge decided into H so far

  int M() const { return static_cast<int>(order.size()); }

  void add_to_R(const FEdge& e) {
    for (const auto& ed : e.edges) R.insert(ed);
  }
};

struct QContributor {
  long long index = 0;  // step for F-edges, -(placement + 1) for cycles, 0 for aggregated cycles
  bool cycle = false;
  int exponent = 0;
};

struct BadWitness {
  long long index = 0;
  bool cycle = false;
  std::string kind;  // avoidable, clean_cycle, unresolved
  FGraph witness;
};

struct QReport {
  double q_total = 0, q_cb = 0, q_cg = 0, q_eb = 0, q_eg = 0;
  std::vector<QContributor> contributors;
  std::vector<BadWitness> bad_witnesses;
  bool truncated = false;
  bool aggregated = false;
  std::uint64_t nodes = 0;

  nlohmann::json to_json() const {
    nlohmann::json j{{"total", q_total}, {"cb", q_cb}, {"cg", q_cg}, {"eb", q_eb}, {"eg", q_eg},
                     {"bad_witnesses", bad_witnesses.size()}};
    if (truncated) j["truncated"] = true;
    return j;
  }
};

inline constexpr std::uint64_t kDefaultQNodeCap = 5'000'000;

namespace q_detail {

inline BadWitness edge_witness(const FGraph& h0j, const Pattern& f, const FEdge& target, long long index) {
  BadWitness w;
  w.index = index;
  try {
    w.witness = inducing_witness(h0j, f, target);
    w.kind = classify(w.witness).kind == CycleKind::avoidable ? "avoidable" : "clean_cycle";
  } catch (const WitnessNotFound&) {
    w.kind = "unresolved";
  }
  return w;
}

inline BadWitness cycle_witness(const FGraph& h0j, const Pattern& f, const FGraph& cyc, long long index) {
  BadWitness w;
  w.index = index;
  w.cycle = true;
  std::vector<FEdge> merged;
  for (const auto& e : cyc.fedges()) {
    if (h0j.contains(e)) {
      merged.push_back(e);
      continue;
    }
    BadWitness sub = edge_witness(h0j, f, e, index);
    if (sub.kind == "avoidable") {
      sub.cycle = true;
      return sub;
    }
    if (sub.kind == "unresolved") {
      w.kind = "unresolved";
      return w;
    }
    for (const auto& x : sub.witness.fedges()) merged.push_back(x);
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  w.witness = FGraph::of(merged);
  w.kind = classify(w.witness).kind == CycleKind::avoidable ? "avoidable" : "unresolved";
  return w;
}

inline bool meets(const std::vector<Edge>& a, const std::vector<Edge>& b) {
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  return false;
}

}  // namespace q_detail

// Q = sum over i in N with E'_i meeting E'_j of p^{|E_i \ (E_j u R)|}. Cycles
// come from `inv` when given, otherwise from a local enumeration per cycle
// type anchored on an edge of E'_j.
inline QReport q_report(const CouplingState& st, int j, const Pattern& f, int n, double p,
                        const CycleInventory* inv, const std::vector<CycleType>* types = nullptr,
                        std::uint64_t node_cap = kDefaultQNodeCap, bool witnesses = true) {
  QReport rep;
  const FEdge& fj = st.order[j - 1];
  std::vector<Edge> ej_free;
  for (const auto& e : fj.edges)
    if (!st.R.count(e)) ej_free.push_back(e);
  auto in_k = [&](const Edge& e) { return st.R.count(e) || fj.has_edge(e); };
  FGraph h0j = st.H0;
  h0j.add_fedge(fj);
  if (ej_free.empty()) return rep;

  for (int i : st.Nprime) {
    const FEdge& fi = st.order[i - 1];
    std::vector<Edge> fi_free;
    int exponent = 0;
    for (const auto& e : fi.edges) {
      if (!st.R.count(e)) fi_free.push_back(e);
      if (!in_k(e)) ++exponent;
    }
    if (!q_detail::meets(fi_free, ej_free)) continue;
    double term = std::pow(p, exponent);
    rep.contributors.push_back({i, false, exponent});
    if (exponent == 0) {
      rep.q_eb += term;
      if (witnesses) rep.bad_witnesses.push_back(q_detail::edge_witness(h0j, f, fi, i));
    } else {
      rep.q_eg += term;
    }
  }

  auto add_cycle = [&](long long index, int exponent, double weight, const FGraph* cyc) {
    if (exponent == 0) {
      rep.q_cb += weight;
      if (cyc && witnesses) rep.bad_witnesses.push_back(q_detail::cycle_witness(h0j, f, *cyc, index));
    } else {
      rep.q_cg += weight * std::pow(p, exponent);
    }
  };

  if (inv) {
    for (int c = 0; c < inv->size(); ++c) {
      const auto& it = inv->items[c];
      if (st.C1_keys.count(it.cycle.fedges())) continue;
      std::vector<Edge> free;
      int exponent = 0;
      for (const auto& e : it.dedges.edges) {
        if (!st.R.count(e)) free.push_back(e);
        if (!in_k(e)) ++exponent;
      }
      for (const auto& d : it.dedges.dummies)
        if (!st.R_dummies.count(d)) ++exponent;
      if (!q_detail::meets(free, ej_free)) continue;
      rep.contributors.push_back({-(c + 1LL), true, exponent});
      add_cycle(-(c + 1LL), exponent, 1.0, &it.cycle);
    }
  } else if (types) {
    rep.aggregated = true;
    std::set<Vertex> lset(fj.vertices.begin(), fj.vertices.end());
    for (const auto& e : st.R) lset.insert(e.u), lset.insert(e.v);
    std::vector<Vertex> L(lset.begin(), lset.end());
    long long outside = n - static_cast<long long>(L.size());
    std::set<CycleKey> bad_seen;
    for (const auto& t : *types) {
      const FGraph& shape = t.shape;
      int v = shape.num_vertices();
      auto te = shadow(shape).edges();
      std::vector<Vertex> img(static_cast<std::size_t>(v), -1);  // -2 marks an outside vertex
      std::set<Vertex> used;
      int n_out = 0;
      auto leaf = [&]() {
        int ink = 0, hits = 0;
        for (const auto& e : te) {
          Vertex a = img[e.u], b = img[e.v];
          if (a < 0 || b < 0) continue;
          Edge g = make_edge(a, b);
          if (in_k(g)) ++ink;
          if (std::find(ej_free.begin(), ej_free.end(), g) != ej_free.end()) ++hits;
        }
        int exponent = static_cast<int>(te.size()) - ink + (t.sparse ? 1 : 0);
        if (n_out == 0 && ink == static_cast<int>(te.size())) {
          std::vector<FEdge> es;
          for (const auto& e : shape.fedges()) {
            std::vector<Vertex> emb;
            for (Vertex x : e.embedding) emb.push_back(img[x]);
            es.push_back(make_fedge(f, emb));
          }
          std::sort(es.begin(), es.end());
          if (st.C1_keys.count(es)) return;
          if (exponent == 0) {
            if (bad_seen.insert(es).second) {
              FGraph cyc = FGraph::of(es);
              rep.contributors.push_back({0, true, 0});
              add_cycle(0, 0, 1.0, &cyc);
            }
            return;
          }
        }
        double weight = static_cast<double>(falling(outside, n_out)) / (static_cast<double>(hits) * t.aut);
        add_cycle(0, exponent, weight, nullptr);
      };
      auto rec = [&](auto& self, int pos) -> void {
        if (rep.truncated) return;
        if (++rep.nodes > node_cap) {
          rep.truncated = true;
          return;
        }
        if (pos == v) {
          leaf();
          return;
        }
        if (img[pos] != -1) {
          self(self, pos + 1);
          return;
        }
        if (outside - n_out > 0) {
          img[pos] = -2;
          ++n_out;
          self(self, pos + 1);
          --n_out;
        }
        for (Vertex x : L) {
          if (used.count(x)) continue;
          used.insert(x);
          img[pos] = x;
          self(self, pos + 1);
          used.erase(x);
        }
        img[pos] = -1;
      };
      for (const auto& e : te)
        for (const auto& g : ej_free)
          for (int flip = 0; flip < 2; ++flip) {
            img.assign(static_cast<std::size_t>(v), -1);
            used.clear();
            img[e.u] = flip ? g.v : g.u;
            img[e.v] = flip ? g.u : g.v;
            used.insert(g.u);
            used.insert(g.v);
            rec(rec, 0);
          }
    }
  }
  // Aggregated bad cycles are collected once per placement above; the
  // per-map weights of the good part already sum to one per placement.
  rep.q_total = rep.q_cb + rep.q_cg + rep.q_eb + rep.q_eg;
  return rep;
}

}  // namespace sharpf
