#pragma once

#include "copies.hpp"
#include "dgraph.hpp"
#include "exponents.hpp"
#include "fgraph.hpp"
#include "pattern.hpp"
#include "sampler.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace sharpf {

// Random F-graph on [n] whose copies reuse vertices of earlier copies, so
// that induced F-edges are common.
inline FGraph random_clustered_fgraph(const Pattern& f, int n, int max_fedges, CounterRng& rng) {
  auto below = [&](std::size_t k) { return std::min(k - 1, static_cast<std::size_t>(rng.uniform() * k)); };
  FGraph h(n);
  int want = 1 + static_cast<int>(below(static_cast<std::size_t>(max_fedges)));
  for (int i = 0; i < want; ++i) {
    std::vector<Vertex> used;
    for (const auto& e : h.fedges()) used.insert(used.end(), e.vertices.begin(), e.vertices.end());
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (std::size_t k = used.size(); k > 1; --k) std::swap(used[k - 1], used[below(k)]);
    std::size_t reuse = used.empty() ? 0 : below(std::min<std::size_t>(f.r, used.size()) + 1);
    std::vector<Vertex> emb(used.begin(), used.begin() + static_cast<std::ptrdiff_t>(reuse));
    std::vector<Vertex> rest;
    for (Vertex x = 0; x < n; ++x)
      if (std::find(emb.begin(), emb.end(), x) == emb.end()) rest.push_back(x);
    while (static_cast<int>(emb.size()) < f.r) {
      std::size_t k = below(rest.size());
      emb.push_back(rest[k]);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    }
    for (std::size_t k = emb.size(); k > 1; --k) std::swap(emb[k - 1], emb[below(k)]);
    h.add_fedge(make_fedge(f, emb));
  }
  return h;
}

struct WitnessCheck {
  int instances = 0;
  int induced = 0;
  int failures = 0;
  std::vector<std::string> failure_examples;
};

// Every induced F-edge must have a witness with at most e(F) F-edges that is
// an avoidable configuration or a clean cycle.
inline WitnessCheck witness_check(const Pattern& f, int instances, int max_n, int max_fedges, Seed seed) {
  WitnessCheck out;
  int lo = std::min(max_n, f.r + 1);
  CounterRng rng(seed, Draw::extra);
  for (int i = 0; i < instances; ++i) {
    int n = lo + std::min(max_n - lo, static_cast<int>(rng.uniform() * (max_n - lo + 1)));
    FGraph h = random_clustered_fgraph(f, n, max_fedges, rng);
    ++out.instances;
    for (const auto& target : induced_f_edges(h, f)) {
      ++out.induced;
      bool ok = false;
      try {
        FGraph w = inducing_witness(h, f, target);
        auto kind = classify(w).kind;
        ok = w.num_fedges() <= f.s && covers_edges(w, target) &&
             (kind == CycleKind::avoidable || kind == CycleKind::clean_cycle);
      } catch (const WitnessNotFound&) {
      }
      if (!ok) {
        ++out.failures;
        if (out.failure_examples.size() < 5) out.failure_examples.push_back(describe(h) + " target " + describe(target));
      }
    }
  }
  return out;
}

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  DBalanceReport dbalance;
  std::optional<ConstantsChoice> constants;
  WitnessCheck witnesses;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
  }
};

inline VerifyReport run_verify(const Pattern& f, int max_len, int witness_instances = 1000, int witness_max_n = 10,
                               int witness_max_fedges = 5, Seed seed = {1, 0}) {
  VerifyReport rep;
  rep.checks.push_back({"strictly_1_balanced", f.strictly_1_balanced, "d1 = " + to_string(f.d1)});
  if (f.r < 3) {
    rep.checks.push_back({"pattern_regime", false, "patterns with two vertices have no clean cycles to verify"});
    return rep;
  }
  rep.dbalance = verify_clean_dcycles_strictly_balanced(f, max_len);
  int bad = 0;
  for (const auto& row : rep.dbalance.rows) bad += !row.strict_ok;
  rep.checks.push_back({"clean_dcycles_strictly_balanced", rep.dbalance.ok(),
                        std::to_string(rep.dbalance.rows.size()) + " cycle types, " + std::to_string(bad) + " failing"});
  try {
    rep.constants = select_constants(f, max_len);
    rep.checks.push_back({"f1_negative", rep.constants->certified_max_f1 < 0,
                          "f1max = " + to_string(rep.constants->certified_max_f1)});
    rep.checks.push_back({"g1_negative", rep.constants->certified_max_g1 < 0,
                          "g1max = " + to_string(rep.constants->certified_max_g1)});
  } catch (const InfeasibleError& e) {
    rep.checks.push_back({"exponents_negative", false, e.what()});
  }
  rep.witnesses = witness_check(f, witness_instances, witness_max_n, witness_max_fedges, seed);
  rep.checks.push_back({"inducing_witnesses", rep.witnesses.failures == 0,
                        std::to_string(rep.witnesses.induced) + " induced F-edges in " +
                            std::to_string(rep.witnesses.instances) + " F-graphs, " +
                            std::to_string(rep.witnesses.failures) + " without witness"});
  return rep;
}

}  // namespace sharpf
