#include "sharpf/coupling/chen_stein.hpp"
#include "sharpf/coupling/run.hpp"
#include "sharpf/io.hpp"
#include "sharpf/pattern.hpp"
#include "sharpf/scan.hpp"
#include "sharpf/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace sharpf;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string pattern = "k3";
  std::string pattern_file;
  std::vector<long long> n;
  std::vector<double> p;
  std::optional<double> pi, delta, eps;
  int trials = 0;
  std::string seed = "1";
  std::string mode;
  std::uint64_t budget = kDefaultFactorBudget;
  std::string out;
  int max_len = 0;
  bool summary_only = false;
};

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = std::stoull(s, &used, 0);
  if (used != s.size()) throw DomainError("seed must be decimal or 0x-prefixed hex: " + s);
  return v;
}

Pattern load_pattern(const Options& o) {
  if (!o.pattern_file.empty()) return analyze_pattern(read_edge_list_file(o.pattern_file), fs::path(o.pattern_file).stem());
  return preset(o.pattern);
}

int default_max_len(const Pattern& f) { return std::min(f.s, 4); }

std::string config_line(const std::string& cmd, const Options& o) {
  std::ostringstream s;
  s.precision(17);
  s << "# sharpf " << SHARPF_VERSION << " cmd=" << cmd << " pattern=" << (o.pattern_file.empty() ? o.pattern : o.pattern_file);
  if (!o.n.empty()) {
    s << " n=";
    for (std::size_t i = 0; i < o.n.size(); ++i) s << (i ? ";" : "") << o.n[i];
  }
  if (!o.p.empty()) {
    s << " p=";
    for (std::size_t i = 0; i < o.p.size(); ++i) s << (i ? ";" : "") << o.p[i];
  }
  if (o.pi) s << " pi=" << *o.pi;
  if (o.delta) s << " delta=" << *o.delta;
  if (o.eps) s << " eps=" << *o.eps;
  if (o.trials) s << " trials=" << o.trials;
  if (cmd == "verify" || cmd == "couple" || cmd == "scan") s << " seed=" << parse_seed(o.seed);
  if (!o.mode.empty()) s << " mode=" << o.mode;
  if (cmd == "scan") s << " budget=" << o.budget;
  if (o.max_len) s << " max_len=" << o.max_len;
  return s.str();
}

// Writes to the path, or to stdout when the path is empty or "-".
struct Sink {
  std::ofstream file;
  std::ostream* out = &std::cout;
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    file.open(path);
    if (!file) throw std::runtime_error("cannot open " + path);
    out = &file;
  }
};

std::pair<double, double> constants_for(const Pattern& f, const Options& o) {
  if (o.delta && o.eps) return {*o.delta, *o.eps};
  auto c = select_constants(f, default_max_len(f));
  return {o.delta.value_or(to_double(c.delta)), o.eps.value_or(to_double(c.eps))};
}

int cmd_analyze(const Options& o) {
  Pattern f = load_pattern(o);
  nlohmann::json j{{"name", f.name},
                   {"r", f.r},
                   {"s", f.s},
                   {"aut", f.aut},
                   {"d1", to_string(f.d1)},
                   {"strictly_1_balanced", f.strictly_1_balanced},
                   {"strictly_balanced", density_report(f.graph).strictly_balanced},
                   {"two_connected", f.two_connected},
                   {"copies_per_vertex_set", f.copies_per_set()},
                   {"outside_constant_regime", f.outside_constant_regime}};
  for (long long n : o.n) j["p_star"][std::to_string(n)] = p_star(f, n);
  Sink sink(o.out);
  *sink.out << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const Options& o) {
  Pattern f = load_pattern(o);
  int max_len = o.max_len ? o.max_len : default_max_len(f);
  Options cfg = o;
  cfg.max_len = max_len;
  VerifyReport rep = run_verify(f, max_len, o.trials ? o.trials : 1000, 10, 5, {parse_seed(o.seed), 0});
  fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / (f.name + "_dcycles.csv"));
    csv << config_line("verify", cfg) << '\n';
    write_dbalance_csv(csv, rep.dbalance);
  }
  if (rep.constants) {
    std::ofstream csv(dir / (f.name + "_exponents.csv"));
    csv << config_line("verify", cfg) << '\n';
    write_exponent_csv(csv, f, *rep.constants);
  }
  {
    std::ofstream csv(dir / (f.name + "_checks.csv"));
    csv << config_line("verify", cfg) << '\n' << "check,passed,detail\n";
    for (const auto& c : rep.checks) csv << c.name << ',' << (c.passed ? "true" : "false") << ",\"" << c.detail << "\"\n";
  }
  for (const auto& c : rep.checks) std::cout << (c.passed ? "pass " : "FAIL ") << c.name << ": " << c.detail << '\n';
  if (rep.constants)
    std::cout << "delta = " << to_string(rep.constants->delta) << ", eps = " << to_string(rep.constants->eps) << '\n';
  std::cout << (rep.ok() ? "verify: pass" : "verify: FAIL") << '\n';
  return rep.ok() ? 0 : 1;
}

int cmd_params(const Options& o) {
  Pattern f = load_pattern(o);
  if (o.n.empty()) throw DomainError("params needs --n");
  auto [delta, eps] = constants_for(f, o);
  nlohmann::json out = nlohmann::json::array();
  for (long long n : o.n) {
    auto t = derive_params(f, n, delta, eps, o.pi);
    out.push_back({{"n", n},           {"divisible", t.divisible}, {"delta", t.delta},   {"eps", t.eps},
                   {"pi", t.pi},       {"p", t.p},                 {"p_star", t.p_star}, {"pi_star", t.pi_star},
                   {"pi_prime", t.pi_prime}, {"Delta", t.Delta}});
  }
  Sink sink(o.out);
  *sink.out << out.dump(2) << '\n';
  return 0;
}

int cmd_chen_stein(const Options& o) {
  Pattern f = load_pattern(o);
  if (o.n.empty()) throw DomainError("chen-stein needs --n");
  double eps = o.eps.value_or(0.01);
  double delta = o.delta ? *o.delta : constants_for(f, o).first;
  bool direct = o.mode == "direct";
  Sink sink(o.out);
  auto& out = *sink.out;
  Options cfg = o;
  cfg.eps = eps;
  cfg.delta = delta;
  out << config_line("chen-stein", cfg) << '\n' << "n,pi,p,bound_H,bound_G\n";
  out.precision(17);
  for (long long n : o.n) {
    auto t = derive_params(f, n, delta, eps, o.pi);
    ChenSteinBound b = direct ? chen_stein_bound(build_inventory(f, static_cast<int>(n)), t.pi, t.p)
                              : chen_stein_aggregated(f, static_cast<int>(n), t.pi, t.p);
    out << n << ',' << t.pi << ',' << t.p << ',' << b.bound_H << ',' << b.bound_G << '\n';
  }
  return 0;
}

struct CoupleCounts {
  int seeds = 0, success = 0, b1 = 0, b2 = 0, b3 = 0, step = 0;
  int containment_violations = 0, missing_witness = 0, bound_violations = 0, q_truncated = 0;
};

int cmd_couple(const Options& o) {
  Pattern f = load_pattern(o);
  if (o.n.empty()) throw DomainError("couple needs --n");
  CouplingMode mode = o.mode.empty() || o.mode == "exact" ? CouplingMode::exact : CouplingMode::bound;
  if (!o.mode.empty() && o.mode != "exact" && o.mode != "bound") throw DomainError("--mode must be exact or bound");
  auto [delta, eps] = constants_for(f, o);
  int seeds = o.trials ? o.trials : 100;
  std::uint64_t base = parse_seed(o.seed);
  fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  Options cfg = o;
  cfg.delta = delta;
  cfg.eps = eps;
  cfg.trials = seeds;
  cfg.mode = to_string(mode);
  std::ofstream summary(dir / "couple_summary.csv");
  summary << config_line("couple", cfg) << '\n'
          << "n,mode,seeds,success,B1,B2,B3,step_failure,containment_violations,missing_witness,bound_violations,"
             "q_truncated\n";
  std::ofstream transcripts;
  if (!o.summary_only) transcripts.open(dir / "couple_transcripts.jsonl");
  int status = 0;
  for (long long n : o.n) {
    auto t = derive_params(f, n, delta, eps, o.pi);
    int workers = std::min(worker_count(), seeds);
    std::vector<Transcript> res(static_cast<std::size_t>(seeds));
    CouplingOptions opt;
    opt.mode = mode;
    opt.keep_steps = !o.summary_only;
    parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
      std::unique_ptr<ExactModel> model;
      if (mode == CouplingMode::exact) model = std::make_unique<ExactModel>(f, static_cast<int>(n), t.pi, t.p);
      for (std::size_t i = w; i < res.size(); i += static_cast<std::size_t>(workers))
        res[i] = run_coupling(f, static_cast<int>(n), t, {base + i, 0}, opt, model.get());
    });
    CoupleCounts c;
    for (auto& tr : res) {
      ++c.seeds;
      switch (tr.outcome) {
        case Outcome::success: ++c.success; break;
        case Outcome::B1: ++c.b1; break;
        case Outcome::B2: ++c.b2; break;
        case Outcome::B3: ++c.b3; break;
        case Outcome::step_failure: ++c.step; break;
      }
      if (tr.outcome == Outcome::success && !tr.containment_ok) ++c.containment_violations;
      if (tr.outcome != Outcome::success && tr.witness.is_null()) ++c.missing_witness;
      if (tr.bounds.pi_prime_violations || tr.bounds.pi_violations) ++c.bound_violations;
      c.q_truncated += tr.q_truncated;
      if (transcripts.is_open()) tr.write_jsonl(transcripts);
    }
    summary << n << ',' << to_string(mode) << ',' << c.seeds << ',' << c.success << ',' << c.b1 << ',' << c.b2 << ','
            << c.b3 << ',' << c.step << ',' << c.containment_violations << ',' << c.missing_witness << ','
            << c.bound_violations << ',' << c.q_truncated << '\n';
    std::cout << "n=" << n << " seeds=" << c.seeds << " success=" << c.success << " B1=" << c.b1 << " B2=" << c.b2
              << " B3=" << c.b3 << " step_failure=" << c.step << " containment_violations=" << c.containment_violations
              << '\n';
    if (c.containment_violations || c.missing_witness) status = 1;
  }
  return status;
}

int cmd_scan(const Options& o) {
  Pattern f = load_pattern(o);
  if (o.n.size() != 1) throw DomainError("scan needs exactly one --n");
  ScanConfig c;
  c.n = static_cast<int>(o.n.front());
  c.grid = o.p.empty() ? auto_grid(p_star(f, c.n)) : o.p;
  c.trials = o.trials ? o.trials : 100;
  c.seed = parse_seed(o.seed);
  c.budget = o.budget;
  auto rows = run_scan(f, c);
  Options cfg = o;
  cfg.p = c.grid;
  cfg.trials = c.trials;
  Sink sink(o.out);
  *sink.out << config_line("scan", cfg) << '\n';
  write_scan_csv(*sink.out, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp-threshold experiments for F-factors"};
  app.set_version_flag("--version", std::string(SHARPF_VERSION));
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--pattern", o.pattern, "preset: k2 k3 k4 k5 c4 c5 c6 k4me path3 path4 star3");
    sub->add_option("--pattern-file", o.pattern_file, "edge-list file");
    sub->add_option("--out", o.out, "output file or directory");
  };
  auto* analyze = app.add_subcommand("analyze", "pattern constants");
  common(analyze);
  analyze->add_option("--n", o.n, "host sizes for p*");
  auto* verify = app.add_subcommand("verify", "balance, exponent and witness checks");
  common(verify);
  verify->add_option("--max-len", o.max_len, "longest clean cycle checked");
  verify->add_option("--trials", o.trials, "random F-graphs for the witness check");
  verify->add_option("--seed", o.seed);
  auto* params = app.add_subcommand("params", "derived coupling parameters");
  common(params);
  params->add_option("--n", o.n)->required();
  auto* chen = app.add_subcommand("chen-stein", "Poisson approximation bounds for clean cycle counts");
  common(chen);
  chen->add_option("--n", o.n)->required();
  chen->add_option("--mode", o.mode, "aggregated (default) or direct");
  auto* couple = app.add_subcommand("couple", "coupling campaign");
  common(couple);
  couple->add_option("--n", o.n)->required();
  couple->add_option("--trials", o.trials, "number of seeds");
  couple->add_option("--seed", o.seed, "first seed");
  couple->add_option("--mode", o.mode, "exact or bound");
  couple->add_flag("--summary-only", o.summary_only, "skip transcripts");
  auto* scan = app.add_subcommand("scan", "threshold scan of F-factor and F-isolation");
  common(scan);
  scan->add_option("--n", o.n)->required();
  scan->add_option("--p", o.p, "grid; default 9 points over [0.6, 1.5] p*");
  scan->add_option("--trials", o.trials);
  scan->add_option("--seed", o.seed);
  scan->add_option("--budget", o.budget, "search nodes per factor query");
  for (auto* sub : {params, chen, couple}) {
    sub->add_option("--pi", o.pi, "H rate; default n^eps-scaled maximum");
    sub->add_option("--delta", o.delta);
    sub->add_option("--eps", o.eps);
  }
  CLI11_PARSE(app, argc, argv);
  try {
    if (*analyze) return cmd_analyze(o);
    if (*verify) return cmd_verify(o);
    if (*params) return cmd_params(o);
    if (*chen) return cmd_chen_stein(o);
    if (*couple) return cmd_couple(o);
    if (*scan) return cmd_scan(o);
  } catch (const NotStrictly1BalancedError& e) {
    std::cout << "FAIL strictly_1_balanced: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
