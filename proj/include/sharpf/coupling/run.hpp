#pragma once

#include "../fgraph.hpp"
#include "../pattern.hpp"
#include "../sampler.hpp"
#include "exact_model.hpp"
#include "inventory.hpp"
#include "q_report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sharpf {

enum class CouplingMode { exact, bound };
enum class PrecoupleMode { exact, shared_uniform };

inline const char* to_string(CouplingMode m) { return m == CouplingMode::exact ? "exact" : "bound"; }

struct PrecoupleResult {
  std::vector<FGraph> C1, C2;
  bool b3 = false;
  int tries = 0;  // residual draws in exact mode
};

inline constexpr int kMaxResidualTries = 1'000'000;

namespace run_detail {

inline std::vector<FGraph> cycles_of(const ExactModel& m, const CycleSet& s) {
  std::vector<FGraph> out;
  for (int c = 0; c < m.inventory().size(); ++c)
    if (test_bit(s, c)) out.push_back(m.inventory().items[c].cycle);
  return out;
}

inline CycleSet set_of(const ExactModel& m, const std::vector<FGraph>& cs) {
  CycleSet s = m.empty_set();
  for (const auto& c : cs) set_bit(s, m.placement_of(c.fedges()));
  return s;
}

}  // namespace run_detail

// Maximal coupling of the exact cycle-set laws: draw C2 from H, keep C1 = C2
// with probability min(1, P1/P2), otherwise draw C1 from the residual of P1 by
// rejection.
inline PrecoupleResult precouple_exact(ExactModel& m, Seed seed) {
  PrecoupleResult out;
  CounterRng rng(seed, Draw::coupling);
  CycleSet c2 = m.sample_h_cycles(rng);
  CycleSet c1 = c2;
  double a = m.p1(c2), b = m.p2(c2);
  if (!(rng.uniform() < std::min(1.0, a / b))) {
    for (;;) {
      if (++out.tries > kMaxResidualTries) throw InternalInconsistency("residual draw did not terminate");
      CycleSet x = m.sample_g_cycles(rng);
      double px = m.p1(x), qx = m.p2(x);
      if (rng.uniform() < std::max(0.0, 1.0 - qx / px)) {
        c1 = x;
        break;
      }
    }
  }
  out.C1 = run_detail::cycles_of(m, c1);
  out.C2 = run_detail::cycles_of(m, c2);
  out.b3 = c1 != c2;
  return out;
}

namespace run_detail {

// Binomial(N, q) by inversion from one uniform.
inline long long binomial_inversion(long double N, long double q, double u) {
  if (q <= 0 || N <= 0) return 0;
  if (q >= 1) return static_cast<long long>(N);
  long double pmf = std::exp(N * std::log1p(-q)), cdf = pmf;
  if (pmf <= 0) throw RangeError("binomial mean too large for inversion");
  long long k = 0;
  while (u > cdf && k < static_cast<long long>(N)) {
    pmf *= (N - k) / (k + 1) * q / (1 - q);
    ++k;
    cdf += pmf;
    if (pmf < 1e-30L && cdf >= 1) break;
  }
  return k;
}

}  // namespace run_detail

// Law of one shared uniform per placement (C in C2 iff u < q_H, C in C1 iff
// u < q_G), sampled per cycle type: a binomial number of distinct uniform
// placements forms C1, and C2 keeps each with probability q_H / q_G.
inline PrecoupleResult precouple_shared_uniform(const Pattern& f, int n, double pi, double p, Seed seed) {
  PrecoupleResult out;
  if (n < 2 * (f.r - 1)) return out;
  CounterRng rng(seed, Draw::placement);
  for (const auto& t : enumerate_cycle_types(f, f.s)) {
    int v = t.shape.num_vertices();
    if (v > n) continue;
    long double count = static_cast<long double>(count_copies(t.shape, n));
    double qh = std::pow(pi, t.k), qg = std::pow(p, t.k * f.s);
    if (qh > qg) throw InternalInconsistency("H cycle rate exceeds the G* rate");
    long long want = run_detail::binomial_inversion(count, qg, rng.uniform());
    std::set<CycleKey> chosen;
    while (static_cast<long long>(chosen.size()) < want) {
      std::vector<Vertex> pool(static_cast<std::size_t>(n));
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < v; ++i) {
        std::size_t k = static_cast<std::size_t>(i) +
                        std::min<std::size_t>(n - i - 1, static_cast<std::size_t>(rng.uniform() * (n - i)));
        std::swap(pool[i], pool[k]);
      }
      std::vector<FEdge> es;
      for (const auto& e : t.shape.fedges()) {
        std::vector<Vertex> emb;
        for (Vertex x : e.embedding) emb.push_back(pool[x]);
        es.push_back(make_fedge(f, emb));
      }
      std::sort(es.begin(), es.end());
      if (!chosen.insert(es).second) continue;
      FGraph c = FGraph::of(es);
      out.C1.push_back(c);
      if (rng.uniform() < qh / qg) out.C2.push_back(std::move(c));
      else out.b3 = true;
    }
  }
  return out;
}

inline PrecoupleResult precouple_cycles(const Pattern& f, int n, const ThresholdParams& params, Seed seed,
                                        PrecoupleMode mode, ExactModel* model = nullptr) {
  if (n < 2 * (f.r - 1)) return {};
  if (mode == PrecoupleMode::shared_uniform) return precouple_shared_uniform(f, n, params.pi, params.p, seed);
  std::unique_ptr<ExactModel> own;
  if (!model) {
    own = std::make_unique<ExactModel>(f, n, params.pi, params.p);
    model = own.get();
  }
  return precouple_exact(*model, seed);
}

// Exact conditional probabilities (pi_j, pi'_j) for step j given the state.
inline std::pair<double, double> conditional_probs_exact(ExactModel& m, const CouplingState& st, int j) {
  std::uint32_t r_pairs = 0, excluded = 0, prefix = 0;
  for (const auto& e : st.R) r_pairs |= 1U << pair_index(m.n(), e.u, e.v);
  for (int i : st.Nprime) excluded |= 1U << (i - 1);
  for (int i = 0; i < j - 1; ++i) prefix = prefix << 1 | (st.decisions_H[i] == Tri::in ? 1U : 0U);
  double pj = m.pi_g(run_detail::set_of(m, st.C1), r_pairs, excluded, j - 1);
  double pp = m.pi_prime(run_detail::set_of(m, st.C2), prefix, j);
  return {pj, pp};
}

struct BoundCheck {
  int steps_checked = 0;
  int pi_prime_violations = 0;
  int pi_violations = 0;
  double worst_pi_gap = 0;  // most negative pi_j - (1 - Q) p^e(F)
};

struct Transcript {
  nlohmann::json header;
  std::vector<nlohmann::json> steps;
  nlohmann::json trailer;
  Outcome outcome = Outcome::success;
  nlohmann::json witness;
  int failure_step = 0;
  bool containment_checked = false;
  bool containment_ok = false;
  FGraph H;
  DGraph G;
  BoundCheck bounds;
  bool q_truncated = false;
  bool bad_without_witness = false;  // nonzero bad Q part with no B2 witness

  void write_jsonl(std::ostream& out) const {
    out << header.dump() << '\n';
    for (const auto& s : steps) out << s.dump() << '\n';
    out << trailer.dump() << '\n';
  }
};

struct CouplingOptions {
  CouplingMode mode = CouplingMode::exact;
  bool keep_steps = true;
  bool check_bounds = true;
  std::uint64_t q_node_cap = kDefaultQNodeCap;
  bool stop_after_mismatch = true;  // bound mode only
};

namespace run_detail {

inline nlohmann::json params_json(const ThresholdParams& t) {
  return {{"pi", t.pi}, {"p", t.p}, {"delta", t.delta}, {"eps", t.eps}, {"Delta", t.Delta}};
}

inline bool covers_all(const Graph& g, const FEdge& e) {
  return std::all_of(e.edges.begin(), e.edges.end(), [&](const Edge& x) { return g.has_edge(x.u, x.v); });
}

inline bool b_free(const FGraph& h0j, const Pattern& f, double Delta) {
  if (max_f_degree(h0j) >= Delta) return false;
  return !find_avoidable(h0j, 2 * f.s * f.s).has_value();
}

// Approximate conditional draw of G* for bound mode: R forced, other pairs
// independent, then one free edge removed from every excluded F-edge or
// foreign clean d-cycle that came out fully present.
inline DGraph repaired_g(const Pattern& f, int n, double p, const CouplingState& st, Seed seed) {
  std::set<Edge> es(st.R.begin(), st.R.end());
  std::uint64_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++idx)
      if (!es.count({a, b}) && counter_uniform(seed, Draw::pair, idx) < p) es.insert({a, b});
  std::uint64_t extra = 0;
  auto drop_one = [&](const std::vector<Edge>& edges) {
    std::vector<Edge> free;
    for (const auto& e : edges)
      if (!st.R.count(e)) free.push_back(e);
    if (free.empty()) return;
    std::size_t k = static_cast<std::size_t>(counter_uniform(seed, Draw::extra, extra++) * free.size());
    es.erase(free[std::min(k, free.size() - 1)]);
  };
  for (int i : st.Nprime) {
    const auto& fe = st.order[i - 1];
    if (std::all_of(fe.edges.begin(), fe.edges.end(), [&](const Edge& e) { return es.count(e) > 0; }))
      drop_one(fe.edges);
  }
  DGraph g;
  g.base = Graph(Graph(n).vertices(), std::vector<Edge>(es.begin(), es.end()));
  FGraph copies = FGraph::of(enumerate_copies(g.base, f));
  for (const auto& c : enumerate_clean_cycles(copies, f, f.s)) {
    if (st.C1_keys.count(c.fedges())) continue;
    auto d = dcycle_of(c, f);
    if (!d.sparse) drop_one(d.dgraph.base.edges());
  }
  g.base = Graph(Graph(n).vertices(), std::vector<Edge>(es.begin(), es.end()));
  if (n < f.r) return g;
  CopyIndex index(f, n);
  std::uint64_t m = index.size();
  for_each_sparse_cycle(index, f, [&](std::uint64_t i, std::uint64_t k) {
    FEdge a = index.copy(i), b = index.copy(k);
    DummyKey key(a, b);
    std::vector<FEdge> cyc{a, b};
    std::sort(cyc.begin(), cyc.end());
    bool present;
    if (st.C1_keys.count(cyc)) present = true;
    else if (covers_all(g.base, a) && covers_all(g.base, b)) present = false;
    else present = counter_uniform(seed, Draw::dummy, i * m + k) < p;
    if (present) g.dummies.insert(key);
  });
  return g;
}

}  // namespace run_detail

// The two-stage coupling of G*(n, p) and H_F(n, pi).
inline Transcript run_coupling(const Pattern& f, int n, const ThresholdParams& params, Seed seed,
                               const CouplingOptions& opt = {}, ExactModel* model = nullptr) {
  Transcript tr;
  bool exact = opt.mode == CouplingMode::exact;
  std::unique_ptr<ExactModel> own;
  if (exact && !model) {
    own = std::make_unique<ExactModel>(f, n, params.pi, params.p);
    model = own.get();
  }
  tr.header = {{"pattern", f.name},
               {"n", n},
               {"params", run_detail::params_json(params)},
               {"seed", {{"value", seed.value}, {"stream", seed.stream_id}}},
               {"mode", to_string(opt.mode)},
               {"order", "canonical copy order"}};
  if (!exact)
    tr.header["approximations"] = {"pre-coupling by one shared uniform per placement",
                                   "pi'_j replaced by its upper bound pi",
                                   "pi_j replaced by its lower bound (1 - Q) p^e(F)",
                                   "final G*: independent pairs with one-edge repair of excluded sets"};

  CouplingState st;
  CopyIndex index(f, n);
  for (std::uint64_t i = 0; i < index.size(); ++i) st.order.push_back(index.copy(i));
  int M = st.M();
  st.decisions_H.assign(static_cast<std::size_t>(M), Tri::undecided);
  st.decisions_G.assign(static_cast<std::size_t>(M), Tri::undecided);

  PrecoupleResult pc = exact ? precouple_exact(*model, seed)
                             : precouple_shared_uniform(f, n, params.pi, params.p, seed);
  st.C1 = pc.C1;
  st.C2 = pc.C2;
  bool b3 = pc.b3;
  for (const auto& c : st.C1) {
    st.C1_keys.insert(c.fedges());
    auto d = dcycle_of(c, f);
    for (const auto& e : d.dgraph.base.edges()) st.R.insert(e);
    for (const auto& k : d.dgraph.dummies) st.R_dummies.insert(k);
    for (const auto& e : c.fedges()) st.H0.add_fedge(e);
  }
  std::set<FEdge> c1_fedges, c2_fedges;
  for (const auto& c : st.C1) c1_fedges.insert(c.fedges().begin(), c.fedges().end());
  for (const auto& c : st.C2) {
    st.C2_keys.insert(c.fedges());
    c2_fedges.insert(c.fedges().begin(), c.fedges().end());
  }

  std::vector<CycleType> types;
  if (!exact && n >= 2 * (f.r - 1)) types = enumerate_cycle_types(f, f.s);
  const CycleInventory* inv = exact ? &model->inventory() : nullptr;
  CycleSet c1_set, c2_set;
  if (exact) {
    c1_set = run_detail::set_of(*model, st.C1);
    c2_set = run_detail::set_of(*model, st.C2);
  }
  std::uint32_t r_pairs = 0, excluded = 0, prefix = 0;
  if (exact)
    for (const auto& e : st.R) r_pairs |= 1U << pair_index(n, e.u, e.v);
  double pe = std::pow(params.p, f.s);
  int failure_step = 0;
  FGraph failure_h0j;

  bool skip_steps = !exact && b3 && opt.stop_after_mismatch;
  for (int j = 1; j <= M && !skip_steps; ++j) {
    st.j = j;
    const FEdge& fj = st.order[j - 1];
    FGraph h0j = st.H0;
    h0j.add_fedge(fj);
    bool checking = opt.check_bounds && exact && !b3 && failure_step == 0 && run_detail::b_free(h0j, f, params.Delta);
    QReport q = q_report(st, j, f, n, params.p, inv, exact ? nullptr : &types, opt.q_node_cap, checking);
    if (q.truncated) tr.q_truncated = true;
    double pj = 0, pp = 0;
    if (exact) {
      pj = model->pi_g(c1_set, r_pairs, excluded, j - 1);
      pp = model->pi_prime(c2_set, prefix, j);
    } else {
      bool all_r = std::all_of(fj.edges.begin(), fj.edges.end(), [&](const Edge& e) { return st.R.count(e) > 0; });
      if (c2_fedges.count(fj)) {
        pp = 1;
      } else {
        FGraph around = st.H;
        for (const auto& e : c2_fedges) around.add_fedge(e);
        around.add_fedge(fj);
        bool closes = false;
        for (const auto& c : enumerate_clean_cycles(around, f, f.s))
          if (c.contains(fj) && !st.C2_keys.count(c.fedges())) closes = true;
        pp = closes ? 0 : params.pi;
      }
      if (c1_fedges.count(fj) || all_r) pj = 1;
      else pj = q.truncated ? 0 : std::max(0.0, (1 - q.q_total) * pe);
    }

    if (checking) {
      ++tr.bounds.steps_checked;
      if (pp > params.pi + 1e-12 && !c2_fedges.count(fj)) ++tr.bounds.pi_prime_violations;
      double gap = pj - (1 - q.q_total) * pe;
      tr.bounds.worst_pi_gap = std::min(tr.bounds.worst_pi_gap, gap);
      if (gap < -1e-12) ++tr.bounds.pi_violations;
      bool bad = q.q_cb > 0 || q.q_eb > 0;
      bool witnessed = std::any_of(q.bad_witnesses.begin(), q.bad_witnesses.end(),
                                   [](const BadWitness& w) { return w.kind == "avoidable"; });
      if (bad && !witnessed) tr.bad_without_witness = true;
    }

    nlohmann::json rec{{"j", j}, {"pi_j", pj}, {"pi_prime_j", pp}, {"coin", nullptr}};
    bool h_in = false;
    Tri g = Tri::undecided;
    if (pp == 0 && pj == 0) {
      g = Tri::out;
    } else if (pp <= pj) {
      bool coin = counter_uniform(seed, Draw::coin, j) < pp / pj;
      rec["coin"] = coin;
      if (coin) {
        g = counter_uniform(seed, Draw::decide, j) < pj ? Tri::in : Tri::out;
        h_in = g == Tri::in;
      }
    } else {
      h_in = counter_uniform(seed, Draw::decide, j) < pp;
      if (h_in && failure_step == 0) {
        failure_step = j;
        failure_h0j = h0j;
      }
    }
    st.decisions_H[j - 1] = h_in ? Tri::in : Tri::out;
    st.decisions_G[j - 1] = g;
    prefix = prefix << 1 | (h_in ? 1U : 0U);
    if (h_in) st.H.add_fedge(fj);
    if (g == Tri::in) {
      st.Y.push_back(j);
      st.add_to_R(fj);
      st.H0.add_fedge(fj);
      if (exact) r_pairs |= model->fedge_pairs(j - 1);
    } else if (g == Tri::out) {
      st.Nprime.push_back(j);
      if (exact) excluded |= 1U << (j - 1);
    }
    if (opt.keep_steps) {
      rec["decision_H"] = h_in ? "in" : "out";
      rec["decision_G"] = g == Tri::in ? "in" : g == Tri::out ? "out" : "undecided";
      rec["q"] = q.to_json();
      tr.steps.push_back(std::move(rec));
    }
  }

  // Remaining information goes into the final draw of G*.
  if (exact) {
    std::uint32_t w = model->sample_pairs(c1_set, r_pairs, excluded, counter_uniform(seed, Draw::extra, 0));
    std::vector<Edge> es;
    std::uint64_t idx = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b, ++idx)
        if (w >> idx & 1U) es.push_back({a, b});
    tr.G.base = Graph::from_sorted(Graph(n).vertices(), std::move(es));
    const auto& items = model->inventory().items;
    for (int c = 0; c < static_cast<int>(items.size()); ++c) {
      if (!items[c].sparse) continue;
      const DummyKey& key = *items[c].dgraph.dummies.begin();
      bool present;
      if (test_bit(c1_set, c)) present = true;
      else if (model->sparse_base_present(w, c)) present = false;
      else present = counter_uniform(seed, Draw::dummy, static_cast<std::uint64_t>(c)) < params.p;
      if (present) tr.G.dummies.insert(key);
    }
  } else if (!skip_steps) {
    tr.G = run_detail::repaired_g(f, n, params.p, st, seed);
  }
  tr.H = st.H;

  nlohmann::json events{{"B3", b3}};
  auto avoid = find_avoidable(st.H, 2 * f.s * f.s);
  events["B2"] = avoid.has_value();
  events["B1"] = max_f_degree(st.H) >= params.Delta;
  if (b3) {
    tr.outcome = Outcome::B3;
    tr.witness = {{"C1", pc.C1.size()}, {"C2", pc.C2.size()}};
    for (const auto& c : st.C1)
      if (!st.C2_keys.count(c.fedges())) {
        tr.witness["only_in_C1"] = describe(c);
        break;
      }
    for (const auto& c : st.C2)
      if (!st.C1_keys.count(c.fedges())) {
        tr.witness["only_in_C2"] = describe(c);
        break;
      }
  } else if (failure_step > 0) {
    tr.failure_step = failure_step;
    if (avoid) {
      tr.outcome = Outcome::B2;
      tr.witness = {{"avoidable", describe(*avoid)}, {"fedges", avoid->num_fedges()}};
    } else {
      int deg_step = max_f_degree(failure_h0j), deg_final = max_f_degree(st.H);
      if (deg_step >= params.Delta || deg_final >= params.Delta) {
        tr.outcome = Outcome::B1;
        tr.witness = {{"max_f_degree", std::max(deg_step, deg_final)},
                      {"scope", deg_step >= params.Delta ? "H0+Fj" : "H"},
                      {"Delta", params.Delta}};
      } else {
        tr.outcome = Outcome::step_failure;
        tr.witness = {{"step", failure_step}, {"fedge", describe(st.order[failure_step - 1])}};
      }
    }
  } else {
    tr.outcome = Outcome::success;
  }
  if (tr.outcome == Outcome::success) {
    tr.containment_checked = true;
    tr.containment_ok = true;
    for (const auto& e : st.H.fedges())
      for (const auto& ed : e.edges)
        if (!tr.G.base.has_edge(ed.u, ed.v)) tr.containment_ok = false;
  }
  tr.trailer = {{"outcome", to_string(tr.outcome)},
                {"events", events},
                {"witness", tr.witness},
                {"H_fedges", st.H.num_fedges()},
                {"G_edges", tr.G.base.num_edges()},
                {"G_dummies", tr.G.dummies.size()}};
  if (tr.containment_checked) tr.trailer["containment"] = tr.containment_ok;
  if (failure_step > 0) tr.trailer["failure_step"] = failure_step;
  if (tr.q_truncated) tr.trailer["q_truncated"] = true;
  if (skip_steps) tr.trailer["steps"] = "skipped after pre-coupling mismatch";
  return tr;
}

}  // namespace sharpf
