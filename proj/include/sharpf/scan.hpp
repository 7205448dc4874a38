#pragma once

#include "copies.hpp"
#include "errors.hpp"
#include "factor.hpp"
#include "pattern.hpp"
#include "sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace sharpf {

inline int worker_count() {
  if (const char* env = std::getenv("SHARPF_WORKERS")) {
    int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, tasks) on `workers` threads; fn writes to slot i only.
template <class Fn>
void parallel_for(std::size_t tasks, int workers, Fn&& fn) {
  if (workers <= 1 || tasks <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline std::vector<double> auto_grid(double p_star, int points = 9, double lo = 0.6, double hi = 1.5) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    double x = lo * std::pow(hi / lo, points == 1 ? 0.0 : static_cast<double>(i) / (points - 1));
    grid.push_back(std::min(1.0, x * p_star));
  }
  return grid;
}

struct ScanConfig {
  int n = 0;
  std::vector<double> grid;
  int trials = 1;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultFactorBudget;
};

struct ScanRow {
  double p = 0;
  int trials = 0;
  double frac_factor = 0;
  double frac_no_isolated = 0;
  double frac_budget_exhausted = 0;
  double mean_copies = 0;
};

struct TrialResult {
  FactorStatus status = FactorStatus::absent;
  bool no_isolated = false;
  std::size_t copies = 0;
};

// Trial t draws G(n, p) from stream t at every grid point, so the graphs of
// one trial are nested along the grid.
inline TrialResult scan_trial(const Pattern& f, int n, double p, std::uint64_t seed, int t, std::uint64_t budget) {
  Graph g = sample_gnp(n, p, {seed, static_cast<std::uint64_t>(t)});
  auto copies = enumerate_copies(g, f);
  TrialResult r;
  r.no_isolated = f_isolated_from(g, copies).isolated.empty();
  r.status = find_f_factor_from(g, f, copies, budget).status;
  r.copies = copies.size();
  return r;
}

inline void validate(const ScanConfig& c, const Pattern& f) {
  if (c.trials < 1) throw DomainError("trials must be at least 1");
  if (c.n % f.r != 0) throw DomainError("n must be divisible by r for factor scans");
  for (double p : c.grid)
    if (!(p > 0 && p <= 1)) throw DomainError("grid values must lie in (0,1]");
}

inline std::vector<ScanRow> run_scan(const Pattern& f, const ScanConfig& c, int workers = worker_count()) {
  validate(c, f);
  std::size_t tasks = c.grid.size() * static_cast<std::size_t>(c.trials);
  std::vector<TrialResult> res(tasks);
  parallel_for(tasks, workers, [&](std::size_t i) {
    std::size_t k = i / static_cast<std::size_t>(c.trials);
    int t = static_cast<int>(i % static_cast<std::size_t>(c.trials));
    res[i] = scan_trial(f, c.n, c.grid[k], c.seed, t, c.budget);
  });
  std::vector<ScanRow> rows;
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    ScanRow row;
    row.p = c.grid[k];
    row.trials = c.trials;
    double copies = 0;
    int found = 0, free = 0, exhausted = 0;
    for (int t = 0; t < c.trials; ++t) {
      const auto& r = res[k * static_cast<std::size_t>(c.trials) + static_cast<std::size_t>(t)];
      found += r.status == FactorStatus::found;
      exhausted += r.status == FactorStatus::budget_exhausted;
      free += r.no_isolated;
      copies += static_cast<double>(r.copies);
    }
    row.frac_factor = static_cast<double>(found) / c.trials;
    row.frac_no_isolated = static_cast<double>(free) / c.trials;
    row.frac_budget_exhausted = static_cast<double>(exhausted) / c.trials;
    row.mean_copies = copies / c.trials;
    rows.push_back(row);
  }
  return rows;
}

inline void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "p,trials,frac_factor,frac_no_isolated,frac_budget_exhausted,mean_copies\n";
  out.precision(10);
  for (const auto& r : rows)
    out << r.p << ',' << r.trials << ',' << r.frac_factor << ',' << r.frac_no_isolated << ','
        << r.frac_budget_exhausted << ',' << r.mean_copies << '\n';
}

// First upward 50% crossing, interpolated linearly in log p.
inline std::optional<double> crossing_point(const std::vector<double>& ps, const std::vector<double>& fr,
                                            double level = 0.5) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (fr[i] < level) continue;
    if (i == 0) return std::nullopt;
    double a = std::log(ps[i - 1]), b = std::log(ps[i]);
    double t = (level - fr[i - 1]) / (fr[i] - fr[i - 1]);
    return std::exp(a + t * (b - a));
  }
  return std::nullopt;
}

}  // namespace sharpf
