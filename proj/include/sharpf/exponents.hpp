#pragma once

#include "cycle_types.hpp"
#include "dgraph.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "pattern.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sharpf {

struct ExponentReport {
  Rational f1{0}, f2{0}, f{0};
  Rational g1{0}, g2{0}, g{0};
  bool has_g = false;
  std::string subject;
  std::string context;
};

namespace exponent_detail {

inline Rational f1_of(const Pattern& f, int e, int v, int c) { return Rational(e) / f.d1 - Rational(v - c); }

inline Rational f2_of(const Pattern& f, int e, int v, int c) { return Rational(v - c + 1) - Rational(e, f.s); }

inline Rational g2_of(const Pattern& f, int e, int v, int c, int e_total) {
  return Rational(v - c) + Rational(e_total - e, f.s);
}

}  // namespace exponent_detail

// Exponents for the intersection S of a new F-edge with earlier material.
inline ExponentReport f_exponents(const Pattern& f, const Graph& s, Rational eps) {
  if (s.num_vertices() == 0) throw DomainError("S has no vertices");
  for (Vertex x : s.vertices())
    if (x < 0 || x >= f.r) throw DomainError("S uses a vertex outside F");
  for (const auto& e : s.edges())
    if (!f.graph.has_edge(e.u, e.v)) throw DomainError("S is not a subgraph of F");
  if (s.num_edges() == f.s) throw DomainError("S contains every edge of F");
  int e = s.num_edges(), v = s.num_vertices(), c = components(s).count;
  ExponentReport rep;
  rep.f1 = exponent_detail::f1_of(f, e, v, c);
  rep.f2 = exponent_detail::f2_of(f, e, v, c);
  rep.f = rep.f1 + eps * rep.f2;
  rep.subject = describe(s);
  rep.context = f.name;
  return rep;
}

// Component count of a sub-d-graph; a dummy edge joins every vertex of its cycle.
inline int dgraph_components(const DGraph& s) {
  if (!s.dummies.empty()) return 1;
  return components(s.base).count;
}

inline ExponentReport g_exponents(const Pattern& f, const CleanDCycle& c, const DGraph& s, Rational eps) {
  const DGraph& whole = c.dgraph;
  if (s.base.num_vertices() == 0) throw DomainError("S has no vertices");
  for (Vertex x : s.base.vertices())
    if (!whole.base.has_vertex(x)) throw DomainError("S uses a vertex outside the d-cycle");
  for (const auto& e : s.base.edges())
    if (!whole.base.has_edge(e.u, e.v)) throw DomainError("S uses an edge outside the d-cycle");
  for (const auto& d : s.dummies)
    if (!whole.dummies.count(d)) throw DomainError("S uses a dummy edge outside the d-cycle");
  if (!s.dummies.empty() && s.base.num_vertices() != whole.base.num_vertices())
    throw DomainError("a dummy edge needs every vertex of its cycle");
  if (s.num_edges() >= whole.num_edges()) throw DomainError("S is not a proper sub-d-graph");
  int e = s.num_edges(), v = s.base.num_vertices(), cc = dgraph_components(s);
  ExponentReport rep;
  rep.has_g = true;
  rep.f1 = exponent_detail::f1_of(f, e, v, cc);
  rep.f2 = exponent_detail::f2_of(f, e, v, cc);
  rep.f = rep.f1 + eps * rep.f2;
  rep.g1 = rep.f1 - 1;
  rep.g2 = exponent_detail::g2_of(f, e, v, cc, whole.num_edges());
  rep.g = rep.g1 + eps * rep.g2;
  if (rep.g1 != exponent_detail::f1_of(f, e, v, cc) - 1) throw InternalInconsistency("g1 differs from f1 - 1");
  rep.subject = describe(s.base) + (s.dummies.empty() ? "" : " +dummy");
  rep.context = describe(c.cycle);
  return rep;
}

struct FRow {
  Graph s;
  Rational f1{0}, f2{0};
};

struct GRow {
  std::string cycle;
  std::string subject;
  Rational g1{0}, g2{0};
};

// Every proper edge subset of F with at least one edge, on its spanned vertices.
inline std::vector<FRow> f_admissible_rows(const Pattern& f) {
  std::vector<FRow> rows;
  const auto& es = f.graph.edges();
  int m = static_cast<int>(es.size());
  if (m > 24) throw ResourceLimitError("edge-subset scan of F limited to 24 edges");
  for (std::uint32_t mask = 1; mask + 1 < (1U << m); ++mask) {
    Graph s(0);
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1U) s.add_edge(es[i].u, es[i].v);
    int e = s.num_edges(), v = s.num_vertices(), c = components(s).count;
    rows.push_back({s, exponent_detail::f1_of(f, e, v, c), exponent_detail::f2_of(f, e, v, c)});
  }
  return rows;
}

// Maximal g1 over proper sub-d-graphs. f1 is additive over components, a
// component only gains from taking every edge induced on its vertex set, and
// isolated vertices contribute 0; so the candidates are a single vertex,
// connected induced subgraphs on proper vertex subsets, and spanning
// connected subgraphs missing one edge.
inline std::vector<GRow> g_candidate_rows(const Pattern& f, const CleanDCycle& c) {
  const DGraph& g = c.dgraph;
  const Graph& b = g.base;
  int v = b.num_vertices();
  if (v > 24) throw ResourceLimitError("vertex-subset scan of a d-cycle limited to 24 vertices");
  int total = g.num_edges();
  std::string name = describe(c.cycle);
  std::vector<GRow> rows;
  auto push = [&](std::string subject, int e, int vs, int cs) {
    Rational f1 = exponent_detail::f1_of(f, e, vs, cs);
    rows.push_back({name, std::move(subject), f1 - 1, exponent_detail::g2_of(f, e, vs, cs, total)});
  };
  const auto& vs = b.vertices();
  std::uint32_t full = (1U << v) - 1;
  for (std::uint32_t w = 1; w < full; ++w) {
    std::vector<Vertex> pick;
    for (int i = 0; i < v; ++i)
      if (w >> i & 1U) pick.push_back(vs[i]);
    Graph s = b.induced(pick);
    if (!is_connected(s)) continue;
    push(describe(s), s.num_edges(), s.num_vertices(), 1);
  }
  bool spanning = false;
  for (const auto& e : b.edges()) {
    DGraph s = g;
    std::vector<Edge> keep;
    for (const auto& x : b.edges())
      if (!(x == e)) keep.push_back(x);
    s.base = Graph(b.vertices(), keep);
    if (dgraph_components(s) != 1) continue;
    spanning = true;
    push(describe(s.base) + (s.dummies.empty() ? "" : " +dummy"), s.num_edges(), v, 1);
  }
  for (const auto& d : g.dummies) {
    DGraph s = g;
    s.dummies.erase(d);
    if (dgraph_components(s) != 1) continue;
    spanning = true;
    push(describe(s.base) + (s.dummies.empty() ? "" : " +dummy"), s.num_edges(), v, 1);
  }
  if (!spanning) throw InternalInconsistency("clean d-cycle " + name + " is not 2-edge-connected");
  return rows;
}

struct ConstantsChoice {
  Rational delta{0};
  Rational eps{0};
  Rational certified_max_f1{0};
  Rational certified_max_g1{0};
  Rational max_f2{0};
  Rational g2_bound{0};
  std::vector<FRow> f_rows;
  std::vector<GRow> g_rows;
};

// delta = -max/4. Every g1 is at most -4 delta, so g < -delta once eps times
// the largest possible g2 stays below 3 delta.
inline ConstantsChoice select_constants(const Pattern& f, int max_len) {
  ConstantsChoice out;
  out.f_rows = f_admissible_rows(f);
  if (out.f_rows.empty()) throw InfeasibleError("F has no proper edge subgraph with an edge");
  out.certified_max_f1 = out.f_rows.front().f1;
  out.max_f2 = out.f_rows.front().f2;
  for (const auto& r : out.f_rows) {
    out.certified_max_f1 = std::max(out.certified_max_f1, r.f1);
    out.max_f2 = std::max(out.max_f2, r.f2);
  }
  std::optional<Rational> max_g1;
  for (const auto& t : enumerate_cycle_types(f, max_len)) {
    CleanDCycle c = dcycle_of(t.shape, f);
    for (auto& row : g_candidate_rows(f, c)) {
      if (!max_g1 || row.g1 > *max_g1) max_g1 = row.g1;
      out.g_rows.push_back(std::move(row));
    }
    Rational bound = Rational(c.dgraph.base.num_vertices() - 1) + Rational(c.dgraph.num_edges(), f.s);
    out.g2_bound = std::max(out.g2_bound, bound);
  }
  out.certified_max_g1 = max_g1.value_or(Rational(-1));
  Rational worst = std::max(out.certified_max_f1, out.certified_max_g1);
  if (worst >= 0)
    throw InfeasibleError("exponent maximum " + to_string(worst) + " is not negative for " + f.name);
  out.delta = -worst / 4;
  Rational eps = out.delta / (2 * f.s);
  Rational slope = std::max(out.max_f2, out.g2_bound);
  if (slope > 0) eps = std::min(eps, 3 * out.delta / (2 * slope));
  out.eps = eps;
  for (const auto& r : out.f_rows)
    if (!(r.f1 + eps * r.f2 < -out.delta)) throw InternalInconsistency("f bound fails at the chosen eps");
  for (const auto& r : out.g_rows)
    if (!(r.g1 + eps * r.g2 < -out.delta)) throw InternalInconsistency("g bound fails at the chosen eps");
  if (!(std::max(out.certified_max_f1, out.certified_max_g1) < -2 * out.delta && out.eps < out.delta / f.s))
    throw InternalInconsistency("constant choice violates its own postcondition");
  return out;
}

inline void write_exponent_csv(std::ostream& out, const Pattern& f, const ConstantsChoice& c) {
  out << "kind,pattern,cycle,subject,e1,e2\n";
  for (const auto& r : c.f_rows)
    out << "f," << f.name << ",," << '"' << describe(r.s) << '"' << ',' << to_string(r.f1) << ','
        << to_string(r.f2) << '\n';
  for (const auto& r : c.g_rows)
    out << "g," << f.name << ",\"" << r.cycle << "\",\"" << r.subject << "\"," << to_string(r.g1) << ','
        << to_string(r.g2) << '\n';
}

}  // namespace sharpf
