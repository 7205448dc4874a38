#pragma once

#include "canon.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "rational.hpp"
#include "subgraphs.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sharpf {

struct Pattern {
  std::string name;
  Graph graph;  // vertices relabeled to 0..r-1
  int r = 0;
  int s = 0;
  std::uint64_t aut = 0;
  Rational d1{0};
  bool strictly_1_balanced = false;
  bool two_connected = false;
  // r = 2 lies outside the regime where the closed-form constants are used.
  bool outside_constant_regime = false;
  // Automorphisms as images of 0..r-1.
  std::vector<std::vector<int>> automorphisms;

  // Distinct copies of F on a fixed r-set: r!/aut(F).
  std::uint64_t copies_per_set() const {
    std::uint64_t f = 1;
    for (int i = 2; i <= r; ++i) f *= static_cast<std::uint64_t>(i);
    return f / aut;
  }
};

inline Graph relabel_compact(const Graph& g) {
  std::vector<Edge> es;
  for (const auto& e : g.edges()) es.push_back({g.index_of(e.u), g.index_of(e.v)});
  Graph h(g.num_vertices());
  return Graph(h.vertices(), std::move(es));
}

inline bool two_vertex_connected(const Graph& g) {
  if (g.num_vertices() < 3) return is_connected(g);
  for (Vertex x : g.vertices()) {
    std::vector<Vertex> rest;
    for (Vertex y : g.vertices())
      if (y != x) rest.push_back(y);
    if (!is_connected(g.induced(rest))) return false;
  }
  return is_connected(g);
}

inline constexpr std::uint64_t kAutomorphismListCap = 1'000'000;

// All adjacency-preserving permutations of a graph on 0..n-1, by backtracking.
inline std::vector<std::vector<int>> automorphism_list(const Graph& g) {
  int n = g.num_vertices();
  DenseGraph d = DenseGraph::of(g);
  std::vector<std::vector<int>> out;
  std::vector<int> img(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto& self, int i) -> void {
    if (i == n) {
      if (out.size() >= kAutomorphismListCap) throw ResourceLimitError("too many automorphisms to list");
      out.push_back(img);
      return;
    }
    for (int c = 0; c < n; ++c) {
      if (used[c] || d.adj[c].size() != d.adj[i].size()) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = d.has(i, j) == d.has(c, img[j]);
      if (!ok) continue;
      used[c] = 1;
      img[i] = c;
      self(self, i + 1);
      used[c] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

inline Pattern analyze_pattern(const Graph& input, std::string name = "custom") {
  if (input.num_vertices() < 2) throw DomainError("pattern needs at least 2 vertices");
  if (!is_connected(input)) throw DisconnectedError("pattern is disconnected: " + describe(input));
  Pattern f;
  f.name = std::move(name);
  f.graph = relabel_compact(input);
  f.r = f.graph.num_vertices();
  f.s = f.graph.num_edges();
  DensityReport rep = density_report(f.graph);
  if (!rep.strictly_1_balanced) {
    Graph w = input.induced([&] {
      std::vector<Vertex> labels;
      for (Vertex i : rep.one_balance_violation) labels.push_back(input.vertices()[i]);
      return labels;
    }());
    throw NotStrictly1BalancedError("pattern is not strictly 1-balanced; subgraph " + describe(w) +
                                    " has 1-density " + to_string(Rational(w.num_edges(), w.num_vertices() - 1)) +
                                    " >= " + to_string(*rep.one_density));
  }
  f.strictly_1_balanced = true;
  f.d1 = *rep.one_density;
  f.aut = automorphism_count(f.graph);
  f.automorphisms = automorphism_list(f.graph);
  if (f.automorphisms.size() != f.aut)
    throw InternalInconsistency("automorphism count and listing disagree for " + describe(input));
  f.two_connected = two_vertex_connected(f.graph);
  f.outside_constant_regime = f.r == 2;
  if (f.r >= 3 && !f.two_connected)
    throw InternalInconsistency("strictly 1-balanced pattern is not 2-vertex-connected: " + describe(input));
  return f;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"k2", "k3", "k4", "k5", "c4", "c5", "c6",
                                                 "k4me", "path3", "path4", "star3"};
  return names;
}

inline Graph preset_graph(const std::string& name) {
  if (name == "k2") return complete_graph(2);
  if (name == "k3") return complete_graph(3);
  if (name == "k4") return complete_graph(4);
  if (name == "k5") return complete_graph(5);
  if (name == "c4") return cycle_graph(4);
  if (name == "c5") return cycle_graph(5);
  if (name == "c6") return cycle_graph(6);
  if (name == "k4me") return Graph::from_pairs({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}});
  if (name == "path3") return path_graph(3);
  if (name == "path4") return path_graph(4);
  if (name == "star3") return Graph::from_pairs({{0, 1}, {0, 2}, {0, 3}});
  throw DomainError("unknown pattern preset '" + name + "'");
}

inline Pattern preset(const std::string& name) { return analyze_pattern(preset_graph(name), name); }

inline long double binom_ld(long long n, long long k) {
  if (k < 0 || k > n) return 0.0L;
  k = std::min(k, n - k);
  long double v = 1.0L;
  for (long long i = 1; i <= k; ++i) v = v * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return v;
}

inline double p_star(const Pattern& f, long long n) {
  if (n <= f.r) throw DomainError("p_star needs n > r");
  long double x = std::log(static_cast<long double>(n)) /
                  (static_cast<long double>(f.copies_per_set()) * binom_ld(n - 1, f.r - 1));
  return static_cast<double>(std::pow(x, 1.0L / f.s));
}

inline double pi_star(const Pattern& f, long long n) {
  if (n <= f.r) throw DomainError("pi_star needs n > r");
  return static_cast<double>(std::log(static_cast<long double>(n)) / binom_ld(n - 1, f.r - 1));
}

// Largest admissible F-edge inclusion probability for given n and eps.
inline double pi_max(const Pattern& f, long long n, double eps) {
  return static_cast<double>(std::pow(static_cast<long double>(n), static_cast<long double>(eps)) /
                             (static_cast<long double>(f.copies_per_set()) * binom_ld(n - 1, f.r - 1)));
}

inline double merged_probability(const Pattern& f, double pi) {
  double m = static_cast<double>(f.copies_per_set());
  return -std::expm1(m * std::log1p(-pi));
}

struct ThresholdParams {
  long long n = 0;
  bool divisible = false;
  double eps = 0;
  double delta = 0;
  double pi = 0;
  double p = 0;
  double p_star = 0;
  double pi_star = 0;
  double pi_prime = 0;
  double Delta = 0;
};

inline ThresholdParams derive_params(const Pattern& f, long long n, double delta, double eps,
                                     std::optional<double> pi_override = std::nullopt) {
  if (!(delta > 0) || !(eps > 0)) throw DomainError("delta and eps must be positive");
  if (n <= f.r) throw DomainError("derive_params needs n > r");
  ThresholdParams t;
  t.n = n;
  t.divisible = n % f.r == 0;
  t.eps = eps;
  t.delta = delta;
  t.pi = pi_override ? *pi_override : pi_max(f, n, eps);
  if (t.pi < 0 || t.pi > 1) throw RangeError("pi outside [0,1]");
  long double denom = -std::expm1(-static_cast<long double>(delta) * std::log(static_cast<long double>(n)));
  t.p = static_cast<double>(std::pow(static_cast<long double>(t.pi) / denom, 1.0L / f.s));
  if (t.p > 1) throw RangeError("derived p = " + std::to_string(t.p) + " exceeds 1");
  t.p_star = p_star(f, n);
  t.pi_star = pi_star(f, n);
  t.pi_prime = merged_probability(f, t.pi);
  double ne = std::pow(static_cast<double>(n), eps);
  t.Delta = ne + std::log(static_cast<double>(n)) * std::pow(static_cast<double>(n), eps / 2);
  return t;
}

}  // namespace sharpf
