#pragma once

#include "inventory.hpp"

#include <cmath>
#include <vector>

namespace sharpf {

struct ChenSteinBound {
  double bound_H = 0;
  double bound_G = 0;
};

// 4 (sum_C sum_{C' in B_C} E X_C E X_C' + sum_C sum_{C' in B_C, C' != C} E X_C X_C')
// for the clean-cycle indicators in H (F-edges, rate pi) and in G* (d-edges, rate p).
inline ChenSteinBound chen_stein_bound(const CycleInventory& inv, double pi, double p) {
  long double prod_h = 0, joint_h = 0, prod_g = 0, joint_g = 0;
  for (int i = 0; i < inv.size(); ++i) {
    const auto& a = inv.items[i];
    for (int j : inv.neighborhoods[i]) {
      const auto& b = inv.items[j];
      prod_h += static_cast<long double>(inv.q_H(i, pi)) * inv.q_H(j, pi);
      prod_g += static_cast<long double>(inv.q_G(i, p)) * inv.q_G(j, p);
      if (i == j) continue;
      std::vector<FEdge> u;
      std::set_union(a.cycle.fedges().begin(), a.cycle.fedges().end(), b.cycle.fedges().begin(),
                     b.cycle.fedges().end(), std::back_inserter(u));
      joint_h += std::pow(static_cast<long double>(pi), static_cast<long double>(u.size()));
      joint_g += std::pow(static_cast<long double>(p), static_cast<long double>(union_size(a.dedges, b.dedges)));
    }
  }
  return {static_cast<double>(4 * (prod_h + joint_h)), static_cast<double>(4 * (prod_g + joint_g))};
}

// Same bound summed by cycle type: a representative C on 0..v-1 meets every
// other placement C' through a partial injection of V(C') into V(C); the
// remaining vertices of C' land outside in (n - v)_{rest} ways.
inline ChenSteinBound chen_stein_aggregated(const Pattern& f, int n, double pi, double p, int max_len = -1) {
  if (max_len < 0) max_len = f.s;
  auto types = enumerate_cycle_types(f, max_len);
  long double prod_h = 0, joint_h = 0, prod_g = 0, joint_g = 0;
  for (const auto& t : types) {
    int v = t.shape.num_vertices();
    if (v > n) continue;
    long double copies = falling(n, v) / static_cast<long double>(t.aut);
    DEdges da = d_edges_of(dcycle_of(t.shape, f).dgraph);
    long double qh = std::pow(static_cast<long double>(pi), t.k);
    long double qg = std::pow(static_cast<long double>(p), t.k * f.s);
    for (const auto& u : types) {
      int w = u.shape.num_vertices();
      if (w > n) continue;
      long double qh2 = std::pow(static_cast<long double>(pi), u.k);
      long double qg2 = std::pow(static_cast<long double>(p), u.k * f.s);
      std::vector<Vertex> image(static_cast<std::size_t>(w), -1);
      std::vector<char> used(static_cast<std::size_t>(v), 0);
      auto leaf = [&](int inside) {
        if (inside == 0) return;
        int outside = w - inside;
        if (v + outside > n) return;
        std::vector<Vertex> img = image;
        int fresh = v;
        for (auto& x : img)
          if (x < 0) x = fresh++;
        std::vector<FEdge> es;
        for (const auto& e : u.shape.fedges()) {
          std::vector<Vertex> emb;
          for (Vertex x : e.embedding) emb.push_back(img[shape_index(u.shape, x)]);
          es.push_back(make_fedge(f, emb));
        }
        FGraph c2 = FGraph::of(es);
        long double mult = falling(n - v, outside) / static_cast<long double>(u.aut);
        prod_h += copies * mult * qh * qh2;
        prod_g += copies * mult * qg * qg2;
        if (c2 == t.shape) return;
        std::vector<FEdge> un;
        std::set_union(t.shape.fedges().begin(), t.shape.fedges().end(), c2.fedges().begin(), c2.fedges().end(),
                       std::back_inserter(un));
        joint_h += copies * mult * std::pow(static_cast<long double>(pi), static_cast<long double>(un.size()));
        DEdges db = d_edges_of(dcycle_of(c2, f).dgraph);
        joint_g += copies * mult *
                   std::pow(static_cast<long double>(p), static_cast<long double>(union_size(da, db)));
      };
      auto rec = [&](auto& self, int pos, int inside) -> void {
        if (pos == w) {
          leaf(inside);
          return;
        }
        image[pos] = -1;
        self(self, pos + 1, inside);
        for (int x = 0; x < v; ++x) {
          if (used[x]) continue;
          used[x] = 1;
          image[pos] = x;
          self(self, pos + 1, inside + 1);
          used[x] = 0;
        }
        image[pos] = -1;
      };
      rec(rec, 0, 0);
    }
  }
  return {static_cast<double>(4 * (prod_h + joint_h)), static_cast<double>(4 * (prod_g + joint_g))};
}

}  // namespace sharpf
