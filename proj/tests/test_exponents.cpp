#include "fgraph_gen.hpp"
#include "sharpf/exponents.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace sharpf;

namespace {

// g1 maximum over every proper sub-d-graph by direct edge-subset enumeration.
Rational brute_max_g1(const Pattern& f, const CleanDCycle& c) {
  const auto& es = c.dgraph.base.edges();
  int nb = static_cast<int>(es.size());
  int nd = static_cast<int>(c.dgraph.dummies.size());
  int total = nb + nd;
  Rational best(-1);
  for (std::uint32_t mask = 1; mask + 1 < (1U << total); ++mask) {
    DGraph s;
    for (int i = 0; i < nb; ++i)
      if (mask >> i & 1U) s.base.add_edge(es[i].u, es[i].v);
    int di = 0;
    for (const auto& d : c.dgraph.dummies)
      if (mask >> (nb + di++) & 1U) s.dummies.insert(d);
    if (!s.dummies.empty())
      for (Vertex x : c.dgraph.base.vertices()) s.base.add_vertex(x);
    if (s.base.num_vertices() == 0) continue;
    best = std::max(best, g_exponents(f, c, s, Rational(0)).g1);
  }
  return best;
}

}  // namespace

TEST(FExponents, SingleEdgeOfTriangle) {
  auto f = preset("k3");
  auto rep = f_exponents(f, Graph::from_pairs({{0, 1}}), Rational(1, 100));
  EXPECT_EQ(rep.f1, Rational(-1, 3));
  EXPECT_EQ(rep.f2, Rational(5, 3));
  EXPECT_EQ(rep.f, rep.f1 + Rational(1, 100) * rep.f2);
}

TEST(FExponents, IsolatedVerticesGiveZero) {
  auto f = preset("k3");
  EXPECT_EQ(f_exponents(f, Graph(2), Rational(0)).f1, Rational(0));
  EXPECT_THROW(f_exponents(f, Graph(0), Rational(0)), DomainError);
}

TEST(FExponents, PathOnThreeVertices) {
  auto f = preset("k3");
  EXPECT_EQ(f_exponents(f, Graph::from_pairs({{0, 1}, {1, 2}}), Rational(0)).f1, Rational(-2, 3));
  EXPECT_THROW(f_exponents(f, complete_graph(3), Rational(0)), DomainError);
}

TEST(FExponents, AdditiveOverDisjointUnions) {
  std::mt19937_64 rng(3);
  for (const char* name : {"k4", "c5", "k4me", "c6"}) {
    auto f = preset(name);
    auto rows = f_admissible_rows(f);
    for (int t = 0; t < 200; ++t) {
      const auto& a = rows[rng() % rows.size()];
      const auto& b = rows[rng() % rows.size()];
      int e = a.s.num_edges() + b.s.num_edges();
      int v = a.s.num_vertices() + b.s.num_vertices();
      int c = components(a.s).count + components(b.s).count;
      EXPECT_EQ(Rational(e) / f.d1 - Rational(v - c), a.f1 + b.f1);
    }
  }
}

TEST(GExponents, SparseTwoCycleSingleEdge) {
  auto f = preset("k3");
  auto types = enumerate_cycle_types(f, 2);
  ASSERT_EQ(types.size(), 1U);
  auto c = dcycle_of(types[0].shape, f);
  DGraph s;
  auto e = c.dgraph.base.edges().front();
  s.base.add_edge(e.u, e.v);
  auto rep = g_exponents(f, c, s, Rational(0));
  EXPECT_EQ(rep.g1, Rational(-4, 3));
  EXPECT_EQ(rep.g1, rep.f1 - 1);
  DGraph iso;
  iso.base.add_vertex(e.u);
  EXPECT_EQ(g_exponents(f, c, iso, Rational(0)).g1, Rational(-1));
}

TEST(GExponents, DenseTriangleFace) {
  auto f = preset("k3");
  for (const auto& t : enumerate_cycle_types(f, 3)) {
    if (t.k != 3) continue;
    auto c = dcycle_of(t.shape, f);
    DGraph s;
    const auto& face = c.cycle.fedges().front();
    for (const auto& e : face.edges) s.base.add_edge(e.u, e.v);
    auto rep = g_exponents(f, c, s, Rational(1, 50));
    EXPECT_EQ(rep.g1, Rational(-1));
    EXPECT_EQ(rep.g, rep.g1 + Rational(1, 50) * rep.g2);
  }
}

TEST(GExponents, RejectsImproperSubjects) {
  auto f = preset("k3");
  auto c = dcycle_of(enumerate_cycle_types(f, 2)[0].shape, f);
  EXPECT_THROW(g_exponents(f, c, c.dgraph, Rational(0)), DomainError);
  DGraph partial;
  partial.base.add_edge(c.dgraph.base.edges()[0].u, c.dgraph.base.edges()[0].v);
  partial.dummies = c.dgraph.dummies;
  EXPECT_THROW(g_exponents(f, c, partial, Rational(0)), DomainError);
}

TEST(GExponents, CandidateMaximumMatchesEdgeSubsetEnumeration) {
  for (const char* name : {"k3", "c4", "k4me", "c5"}) {
    auto f = preset(name);
    for (const auto& t : enumerate_cycle_types(f, 3)) {
      auto c = dcycle_of(t.shape, f);
      if (c.dgraph.num_edges() > 18) continue;
      Rational fast(-100);
      for (const auto& row : g_candidate_rows(f, c)) fast = std::max(fast, row.g1);
      EXPECT_EQ(fast, brute_max_g1(f, c)) << name << " " << t.signature;
    }
  }
}

TEST(SelectConstants, TriangleValues) {
  auto f = preset("k3");
  auto cc = select_constants(f, 2);
  EXPECT_EQ(cc.certified_max_f1, Rational(-1, 3));
  EXPECT_EQ(cc.f_rows.size(), 6U);
  EXPECT_EQ(cc.certified_max_g1, Rational(-2, 3));
  EXPECT_EQ(cc.delta, Rational(1, 12));
  EXPECT_LT(cc.eps, cc.delta / f.s);
  auto c3 = select_constants(f, 3);
  EXPECT_EQ(c3.delta, Rational(1, 12));
}

TEST(SelectConstants, NegativeForTestPatterns) {
  for (const char* name : {"k3", "c4", "c5", "k4", "k4me"}) {
    auto f = preset(name);
    auto cc = select_constants(f, std::min(f.s, 4));
    EXPECT_LT(cc.certified_max_f1, 0) << name;
    EXPECT_LT(cc.certified_max_g1, 0) << name;
    EXPECT_LT(std::max(cc.certified_max_f1, cc.certified_max_g1), -2 * cc.delta);
    EXPECT_GT(cc.eps, 0);
    EXPECT_LT(cc.eps, cc.delta / f.s);
    for (const auto& r : cc.f_rows) EXPECT_LT(r.f1 + cc.eps * r.f2, -cc.delta);
  }
}

TEST(SelectConstants, CsvHasEveryRow) {
  auto f = preset("k3");
  auto cc = select_constants(f, 3);
  std::ostringstream out;
  write_exponent_csv(out, f, cc);
  std::string s = out.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), 1 + cc.f_rows.size() + cc.g_rows.size());
}
