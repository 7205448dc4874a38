#pragma once

#include "copies.hpp"
#include "errors.hpp"
#include "fedge.hpp"
#include "graph.hpp"
#include "pattern.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sharpf {

struct FIsolation {
  std::map<Vertex, int> degrees;
  std::vector<Vertex> isolated;
};

inline FIsolation f_isolated_from(const Graph& g, const std::vector<FEdge>& copies) {
  FIsolation out;
  for (Vertex x : g.vertices()) out.degrees[x] = 0;
  for (const auto& e : copies)
    for (Vertex x : e.vertices) ++out.degrees[x];
  for (auto [x, d] : out.degrees)
    if (d == 0) out.isolated.push_back(x);
  return out;
}

inline FIsolation f_isolated(const Graph& g, const Pattern& f) { return f_isolated_from(g, enumerate_copies(g, f)); }

struct FactorCertificate {
  std::vector<FEdge> parts;
  std::vector<Vertex> covered;
};

enum class FactorStatus { found, absent, budget_exhausted, indivisible };

inline const char* to_string(FactorStatus s) {
  switch (s) {
    case FactorStatus::found: return "found";
    case FactorStatus::absent: return "absent";
    case FactorStatus::budget_exhausted: return "budget_exhausted";
    default: return "indivisible";
  }
}

struct FactorResult {
  FactorStatus status = FactorStatus::absent;
  std::optional<FactorCertificate> certificate;
  std::uint64_t nodes = 0;
  int max_covered = 0;  // most vertices covered by any partial solution
  std::string reason;
};

inline constexpr std::uint64_t kDefaultFactorBudget = 10'000'000;

namespace dlx_detail {

// Dancing links over items 0..items-1 with header at index items.
class ExactCover {
 public:
  ExactCover(int items, const std::vector<std::vector<int>>& options) : items_(items) {
    int root = items;
    int total = items + 1;
    for (const auto& o : options) total += static_cast<int>(o.size());
    L.resize(total);
    R.resize(total);
    U.resize(total);
    D.resize(total);
    C.resize(total);
    row.resize(total, -1);
    size.assign(items + 1, 0);
    for (int i = 0; i <= items; ++i) {
      L[i] = i == 0 ? root : i - 1;
      R[i] = i == items ? 0 : i + 1;
      U[i] = D[i] = C[i] = i;
    }
    if (items == 0) L[root] = R[root] = root;
    else {
      L[0] = root;
      R[root] = 0;
      L[root] = items - 1;
      R[items - 1] = root;
    }
    int next = items + 1;
    for (int r = 0; r < static_cast<int>(options.size()); ++r) {
      int first = -1;
      for (int c : options[r]) {
        int x = next++;
        C[x] = c;
        row[x] = r;
        U[x] = U[c];
        D[x] = c;
        D[U[c]] = x;
        U[c] = x;
        ++size[c];
        if (first < 0) first = L[x] = R[x] = x;
        else {
          L[x] = L[first];
          R[x] = first;
          R[L[first]] = x;
          L[first] = x;
        }
      }
    }
  }

  // Returns true when a cover was found (rows in `solution`); `exhausted`
  // signals the node budget ran out first.
  bool solve(std::uint64_t budget, std::vector<int>& solution, std::uint64_t& nodes, int& best_depth,
             bool& exhausted) {
    budget_ = budget;
    nodes_ = 0;
    best_ = 0;
    exhausted_ = false;
    stack_.clear();
    bool ok = search();
    solution = stack_;
    nodes = nodes_;
    best_depth = best_;
    exhausted = exhausted_;
    return ok;
  }

 private:
  void cover(int c) {
    R[L[c]] = R[c];
    L[R[c]] = L[c];
    for (int i = D[c]; i != c; i = D[i])
      for (int j = R[i]; j != i; j = R[j]) {
        D[U[j]] = D[j];
        U[D[j]] = U[j];
        --size[C[j]];
      }
  }

  void uncover(int c) {
    for (int i = U[c]; i != c; i = U[i])
      for (int j = L[i]; j != i; j = L[j]) {
        ++size[C[j]];
        D[U[j]] = j;
        U[D[j]] = j;
      }
    R[L[c]] = c;
    L[R[c]] = c;
  }

  bool search() {
    int root = items_;
    if (R[root] == root) return true;
    int best = -1;
    for (int c = R[root]; c != root; c = R[c])
      if (best < 0 || size[c] < size[best]) best = c;
    if (size[best] == 0) return false;
    cover(best);
    for (int r = D[best]; r != best; r = D[r]) {
      if (nodes_ >= budget_) {
        exhausted_ = true;
        uncover(best);
        return false;
      }
      ++nodes_;
      stack_.push_back(row[r]);
      best_ = std::max(best_, static_cast<int>(stack_.size()));
      for (int j = R[r]; j != r; j = R[j]) cover(C[j]);
      bool ok = search();
      for (int j = L[r]; j != r; j = L[j]) uncover(C[j]);
      if (ok) {
        uncover(best);
        return true;
      }
      stack_.pop_back();
      if (exhausted_) {
        uncover(best);
        return false;
      }
    }
    uncover(best);
    return false;
  }

  int items_;
  std::vector<int> L, R, U, D, C, row, size;
  std::uint64_t budget_ = 0, nodes_ = 0;
  int best_ = 0;
  bool exhausted_ = false;
  std::vector<int> stack_;
};

}  // namespace dlx_detail

// Exact-cover search over the vertex sets of copies of F in g.
inline FactorResult find_f_factor_from(const Graph& g, const Pattern& f, const std::vector<FEdge>& copies,
                                       std::uint64_t budget = kDefaultFactorBudget) {
  FactorResult res;
  int n = g.num_vertices();
  if (n % f.r != 0) {
    res.status = FactorStatus::indivisible;
    res.reason = "divisibility";
    return res;
  }
  if (n == 0) {
    res.status = FactorStatus::found;
    res.certificate = FactorCertificate{};
    return res;
  }
  std::map<std::vector<Vertex>, int> by_set;
  std::vector<std::vector<int>> options;
  std::vector<int> witness;
  for (int i = 0; i < static_cast<int>(copies.size()); ++i) {
    if (!by_set.emplace(copies[i].vertices, static_cast<int>(options.size())).second) continue;
    std::vector<int> items;
    for (Vertex x : copies[i].vertices) items.push_back(g.index_of(x));
    options.push_back(std::move(items));
    witness.push_back(i);
  }
  std::vector<char> touched(static_cast<std::size_t>(n), 0);
  for (const auto& o : options)
    for (int c : o) touched[c] = 1;
  if (std::find(touched.begin(), touched.end(), 0) != touched.end()) {
    res.status = FactorStatus::absent;
    res.reason = "F-isolated vertex";
    return res;
  }
  dlx_detail::ExactCover ec(n, options);
  std::vector<int> sol;
  int depth = 0;
  bool exhausted = false;
  bool ok = ec.solve(budget, sol, res.nodes, depth, exhausted);
  res.max_covered = depth * f.r;
  if (ok) {
    res.status = FactorStatus::found;
    FactorCertificate cert;
    for (int r : sol) cert.parts.push_back(copies[witness[r]]);
    std::sort(cert.parts.begin(), cert.parts.end());
    cert.covered = g.vertices();
    res.certificate = std::move(cert);
    res.max_covered = n;
  } else if (exhausted) {
    res.status = FactorStatus::budget_exhausted;
    res.reason = "node budget exhausted";
  } else {
    res.status = FactorStatus::absent;
    res.reason = "exhaustive search";
  }
  return res;
}

inline FactorResult find_f_factor(const Graph& g, const Pattern& f, std::uint64_t budget = kDefaultFactorBudget) {
  if (g.num_vertices() % f.r != 0) return find_f_factor_from(g, f, {}, budget);
  return find_f_factor_from(g, f, enumerate_copies(g, f), budget);
}

// Disjointness, coverage, and membership of every part.
inline bool validate_certificate(const FactorCertificate& cert, const Graph& g, const Pattern& f) {
  std::set<Vertex> seen;
  for (const auto& part : cert.parts) {
    if (static_cast<int>(part.vertices.size()) != f.r) return false;
    for (Vertex x : part.vertices)
      if (!seen.insert(x).second || !g.has_vertex(x)) return false;
    for (const auto& e : part.edges)
      if (!g.has_edge(e.u, e.v)) return false;
    if (make_fedge(f, part.embedding) != part) return false;
  }
  return static_cast<int>(seen.size()) == g.num_vertices();
}

inline nlohmann::json certificate_to_json(const FactorCertificate& cert) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : cert.parts) j.push_back(p.embedding);
  return j;
}

}  // namespace sharpf
