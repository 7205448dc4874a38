#include "oracles.hpp"
#include "sharpf/canon.hpp"
#include "sharpf/coupling/chen_stein.hpp"
#include "sharpf/coupling/run.hpp"
#include "sharpf/dgraph.hpp"
#include "sharpf/exponents.hpp"
#include "sharpf/factor.hpp"
#include "sharpf/pattern.hpp"
#include "sharpf/sampler.hpp"
#include "sharpf/scan.hpp"
#include "sharpf/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace sharpf;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

// Balance classification by enumerating every subgraph (V', E') with
// E' inside G[V'] and (V', E') != G.
std::pair<bool, bool> brute_balance(const Graph& g) {
  int v = g.num_vertices(), e = g.num_edges();
  bool sb = true, s1b = v >= 2;
  for (std::uint32_t w = 1; w < (1U << v); ++w) {
    std::vector<Edge> inside;
    for (const auto& ed : g.edges())
      if ((w >> g.index_of(ed.u) & 1U) && (w >> g.index_of(ed.v) & 1U)) inside.push_back(ed);
    int vs = __builtin_popcount(w);
    for (std::uint32_t m = 0; m < (1U << inside.size()); ++m) {
      int es = __builtin_popcount(m);
      if (vs == v && es == e) continue;
      if (static_cast<long long>(es) * v >= static_cast<long long>(e) * vs) sb = false;
      if (vs >= 2 && es >= 1 && static_cast<long long>(es) * (v - 1) >= static_cast<long long>(e) * (vs - 1))
        s1b = false;
    }
  }
  return {sb, s1b};
}

Verdict c1_balance_oracle() {
  int graphs = 0, mismatches = 0;
  for (int n = 1; n <= 6; ++n) {
    std::set<std::string> seen;
    for (const auto& g : oracle::all_graphs(n)) {
      if (!is_connected(g) || !seen.insert(canonical_form(g)).second) continue;
      ++graphs;
      auto rep = density_report(g);
      auto [sb, s1b] = brute_balance(g);
      if (rep.strictly_balanced != sb || rep.strictly_1_balanced != s1b) ++mismatches;
    }
  }
  return {mismatches == 0 && graphs == 143,
          std::to_string(graphs) + " connected graphs up to isomorphism, " + std::to_string(mismatches) + " mismatches"};
}

Verdict c2_pattern_constants() {
  struct Want {
    std::string name;
    int r, s;
    std::uint64_t aut;
    Rational d1;
  };
  std::vector<Want> wants{{"k3", 3, 3, 6, Rational(3, 2)}, {"k4me", 4, 5, 4, Rational(5, 3)}};
  bool ok = true;
  std::string detail;
  for (const auto& w : wants) {
    Pattern f = preset(w.name);
    bool brute_s1b = brute_balance(f.graph).second;
    std::uint64_t brute_aut = oracle::brute_automorphisms(f.graph);
    bool row = f.r == w.r && f.s == w.s && f.aut == w.aut && f.d1 == w.d1 && brute_aut == w.aut && brute_s1b;
    ok = ok && row;
    detail += w.name + " (r,s,aut,d1)=(" + std::to_string(f.r) + "," + std::to_string(f.s) + "," +
              std::to_string(f.aut) + "," + to_string(f.d1) + ") brute aut " + std::to_string(brute_aut) +
              (brute_s1b ? " strictly 1-balanced; " : " NOT strictly 1-balanced; ");
  }
  return {ok, detail};
}

const std::vector<std::string> kCheckedPatterns{"k3", "c4", "c5", "k4", "k4me"};

Verdict c3_dcycles_balanced() {
  bool ok = true;
  std::string detail;
  for (const auto& name : kCheckedPatterns) {
    Pattern f = preset(name);
    auto rep = verify_clean_dcycles_strictly_balanced(f, std::min(f.s, 4));
    ok = ok && rep.ok() && !rep.rows.empty();
    detail += name + ":" + std::to_string(rep.rows.size()) + (rep.ok() ? " ok; " : " FAIL; ");
  }
  return {ok, detail};
}

Verdict c4_exponents() {
  bool ok = true;
  std::string detail;
  for (const auto& name : kCheckedPatterns) {
    Pattern f = preset(name);
    auto c = select_constants(f, std::min(f.s, 4));
    ok = ok && c.certified_max_f1 < 0 && c.certified_max_g1 < 0;
    if (name == "k3") ok = ok && c.certified_max_f1 == Rational(-1, 3);
    detail += name + " f1max=" + to_string(c.certified_max_f1) + " g1max=" + to_string(c.certified_max_g1) + "; ";
  }
  return {ok, detail};
}

Verdict c5_witnesses() {
  auto w = witness_check(preset("k3"), 1000, 10, 5, {5, 0});
  return {w.failures == 0 && w.instances == 1000 && w.induced > 0,
          std::to_string(w.induced) + " induced F-edges in " + std::to_string(w.instances) + " F-graphs, " +
              std::to_string(w.failures) + " failures"};
}

Verdict c6_merge_law() {
  Pattern f = preset("k4me");
  const int samples = 100000, n = 6;
  const double pi = 0.01;
  long long sets = static_cast<long long>(binom_u64(n, f.r)), hits = 0;
  for (int s = 0; s < samples; ++s) hits += static_cast<long long>(merge_to_hr(sample_hf(n, pi, f, {static_cast<std::uint64_t>(s), 6})).size());
  double q = 1 - std::pow(0.99, 6), trials = static_cast<double>(samples) * static_cast<double>(sets);
  double freq = static_cast<double>(hits) / trials, sd = std::sqrt(q * (1 - q) / trials);
  bool formula = std::abs(merged_probability(f, pi) - q) < 1e-15 && std::abs(q - 0.058520) < 5e-7;
  return {formula && std::abs(freq - q) <= 3 * sd,
          "pooled frequency " + fmt(freq, 7) + " over " + std::to_string(sets) + " vertex sets x " +
              std::to_string(samples) + " samples, expected " + fmt(q, 7) + ", " + fmt((freq - q) / sd, 3) + " sigma"};
}

Verdict c7_coupling() {
  Pattern f = preset("k3");
  const int n = 6, seeds = 10000;
  auto c = select_constants(f, std::min(f.s, 4));
  auto t = derive_params(f, n, to_double(c.delta), to_double(c.eps));
  ExactModel model(f, n, t.pi, t.p);
  CouplingOptions opt;
  opt.keep_steps = false;
  std::vector<int> h(static_cast<std::size_t>(model.num_fedges()), 0), g(static_cast<std::size_t>(model.num_pairs()), 0);
  CopyIndex index(f, n);
  int success = 0, containment = 0, unwitnessed = 0, bound_viol = 0, b1 = 0, b2 = 0, b3 = 0, step = 0;
  for (int s = 1; s <= seeds; ++s) {
    auto tr = run_coupling(f, n, t, {static_cast<std::uint64_t>(s), 0}, opt, &model);
    switch (tr.outcome) {
      case Outcome::success: ++success; break;
      case Outcome::B1: ++b1; break;
      case Outcome::B2: ++b2; break;
      case Outcome::B3: ++b3; break;
      case Outcome::step_failure: ++step; break;
    }
    if (tr.outcome == Outcome::success && !(tr.containment_checked && tr.containment_ok)) ++containment;
    if (tr.outcome != Outcome::success && (tr.witness.is_null() || tr.witness.empty())) ++unwitnessed;
    bound_viol += tr.bounds.pi_prime_violations + tr.bounds.pi_violations;
    for (const auto& e : tr.H.fedges()) ++h[index.index_of(e)];
    Graph shadow_g = project(tr.G);
    for (const auto& e : shadow_g.edges()) ++g[pair_index(n, e.u, e.v)];
  }
  double sh = std::sqrt(t.pi * (1 - t.pi) / seeds), sg = std::sqrt(t.p * (1 - t.p) / seeds), worst = 0;
  int outside = 0;
  for (int x : h) {
    double z = std::abs(static_cast<double>(x) / seeds - t.pi) / sh;
    worst = std::max(worst, z);
    outside += z > 3;
  }
  for (int x : g) {
    double z = std::abs(static_cast<double>(x) / seeds - t.p) / sg;
    worst = std::max(worst, z);
    outside += z > 3;
  }
  std::string detail = "pi=" + fmt(t.pi) + " p=" + fmt(t.p) + "; outcomes success=" + std::to_string(success) +
                       " B1=" + std::to_string(b1) + " B2=" + std::to_string(b2) + " B3=" + std::to_string(b3) +
                       " step=" + std::to_string(step) + "; (a) containment violations " + std::to_string(containment) +
                       "; (b) non-success without witness " + std::to_string(unwitnessed) + "; (c) " +
                       std::to_string(outside) + " of " + std::to_string(h.size() + g.size()) +
                       " marginals beyond 3 sigma, max |z|=" + fmt(worst, 3) + "; bound-check violations " +
                       std::to_string(bound_viol);
  return {containment == 0 && unwitnessed == 0 && outside == 0, detail};
}

Verdict c8_chen_stein() {
  Pattern f = preset("k3");
  auto c = select_constants(f, std::min(f.s, 4));
  double delta = to_double(c.delta), eps = 0.01;
  std::vector<int> ns{8, 12, 16, 20};
  std::vector<double> b;
  bool finite = true, reproducible = true;
  for (int n : ns) {
    auto t = derive_params(f, n, delta, eps);
    auto x = chen_stein_aggregated(f, n, t.pi, t.p), y = chen_stein_aggregated(f, n, t.pi, t.p);
    finite = finite && std::isfinite(x.bound_H) && std::isfinite(x.bound_G);
    reproducible = reproducible && x.bound_H == y.bound_H && x.bound_G == y.bound_G;
    b.push_back(x.bound_H);
  }
  auto t8 = derive_params(f, 8, delta, eps);
  auto direct = chen_stein_bound(build_inventory(f, 8), t8.pi, t8.p);
  bool agrees = std::abs(direct.bound_H - b[0]) <= 1e-9 * b[0];
  bool decreasing = true;
  for (std::size_t i = 1; i < b.size(); ++i) decreasing = decreasing && b[i] < b[i - 1];
  std::string detail = "bound_H at n=8,12,16,20: ";
  for (std::size_t i = 0; i < b.size(); ++i) detail += (i ? ", " : "") + fmt(b[i], 8);
  detail += std::string("; finite ") + (finite ? "yes" : "no") + ", reproducible " + (reproducible ? "yes" : "no") +
            ", direct sum agrees at n=8 " + (agrees ? "yes" : "no") + ", decreasing " + (decreasing ? "yes" : "no");
  if (!decreasing)
    detail += " (finite-size growth of the falling factorials in the cycle counts outweighs the n^(-1+6eps) decay; "
              "the bound peaks near n=16 and decreases from there)";
  return {finite && reproducible && agrees && decreasing, detail};
}

Verdict c9_threshold() {
  Pattern f = preset("k3");
  ScanConfig cfg;
  cfg.n = 60;
  double ps = p_star(f, cfg.n);
  cfg.grid = auto_grid(ps);
  cfg.trials = 200;
  cfg.seed = 1;
  auto rows = run_scan(f, cfg);
  std::vector<double> fac, iso;
  double exhausted = 0;
  for (const auto& r : rows) {
    fac.push_back(r.frac_factor);
    iso.push_back(r.frac_no_isolated);
    exhausted += r.frac_budget_exhausted / static_cast<double>(rows.size());
  }
  auto cf = crossing_point(cfg.grid, fac), ci = crossing_point(cfg.grid, iso);
  std::string detail = "p*(60)=" + fmt(ps, 6) + "; factor crossing " + (cf ? fmt(*cf / ps, 4) + " p*" : "none") +
                       ", no-isolated crossing " + (ci ? fmt(*ci / ps, 4) + " p*" : "none");
  bool ok = cf && ci;
  if (ok) {
    double gap = std::abs(*cf - *ci) / std::min(*cf, *ci);
    detail += ", relative gap " + fmt(gap, 3);
    bool in_window = *cf >= 0.7 * ps && *cf <= 1.4 * ps && *ci >= 0.7 * ps && *ci <= 1.4 * ps;
    ok = gap <= 0.15 && in_window;
    if (!in_window) detail += ", outside [0.7, 1.4] p*";
  }
  detail += "; budget-exhausted fraction " + fmt(exhausted, 3);
  return {ok && exhausted < 0.05, detail};
}

Verdict c10_factor_oracle() {
  std::mt19937_64 rng(10);
  std::vector<std::string> names{"k3", "c4", "k4me", "k4"};
  int mismatches = 0, invalid = 0, exhausted = 0, yes = 0;
  for (int i = 0; i < 1000; ++i) {
    Pattern f = preset(names[static_cast<std::size_t>(i) % names.size()]);
    int n = f.r * (1 + static_cast<int>(rng() % static_cast<std::uint64_t>(12 / f.r)));
    double p = 0.3 + 0.6 * std::uniform_real_distribution<double>(0, 1)(rng);
    Graph g = oracle::random_graph(n, p, rng);
    auto res = find_f_factor(g, f);
    bool brute = oracle::brute_has_factor(g, f.graph);
    if (res.status == FactorStatus::budget_exhausted) ++exhausted;
    bool found = res.status == FactorStatus::found;
    if (found != brute) ++mismatches;
    if (found && !(res.certificate && validate_certificate(*res.certificate, g, f))) ++invalid;
    yes += brute;
  }
  return {mismatches == 0 && invalid == 0 && exhausted == 0,
          "1000 instances (" + std::to_string(yes) + " with a factor), " + std::to_string(mismatches) +
              " mismatches, " + std::to_string(invalid) + " invalid certificates, " + std::to_string(exhausted) +
              " budget-exhausted"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> documented_red, only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    auto parse = [&](std::set<int>& into) {
      if (i + 1 >= argc) throw std::runtime_error("missing value for " + a);
      std::stringstream s(argv[++i]);
      for (std::string x; std::getline(s, x, ',');) into.insert(std::stoi(x));
    };
    if (a == "--documented-red") parse(documented_red);
    else if (a == "--only") parse(only);
    else {
      std::cerr << "usage: acceptance [--only 1,2,...] [--documented-red 8,...]\n";
      return 2;
    }
  }
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"balance oracle equivalence", c1_balance_oracle},
      {"pattern constants", c2_pattern_constants},
      {"clean d-cycles strictly balanced", c3_dcycles_balanced},
      {"exponent negativity", c4_exponents},
      {"inducing witnesses", c5_witnesses},
      {"merge law", c6_merge_law},
      {"coupling fidelity", c7_coupling},
      {"Chen-Stein numerics", c8_chen_stein},
      {"threshold coincidence", c9_threshold},
      {"factor solver oracle", c10_factor_oracle},
  };
  int unexpected = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << ' ' << id << ' ' << criteria[k].first << " [" << fmt(secs, 3)
              << " s]: " << v.detail;
    if (!v.pass && documented_red.count(id)) std::cout << " (documented red)";
    std::cout << std::endl;
    if (!v.pass && !documented_red.count(id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
