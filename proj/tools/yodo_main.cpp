// yodo: one-way sensitivity analysis for discrete Bayesian networks.
//
//   yodo analyze -n net.bif -t "VAR=state" [-e "VAR=state"]... [--format csv|json] [--top N]
//   yodo verify  -n net.bif -t "VAR=state" [-e ...] [--sample K] [--seed S]
//   yodo bench   [net.bif ...] [--synthetic --nodes N --max-parents P --max-states S] [--seed S]
//
// stdout carries the report; diagnostics go to stderr. Exit codes: 0 success,
// 1 analysis/verification failure, 2 input error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "yodo/bif.hpp"
#include "yodo/engine.hpp"
#include "yodo/oracle.hpp"
#include "yodo/query.hpp"
#include "yodo/report_io.hpp"
#include "yodo/sensmetrics.hpp"
#include "yodo/synthetic.hpp"

namespace {

using namespace yodo;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double median_of_3_ms(const std::function<void()>& fn) {
  double t[3];
  for (double& ti : t) {
    const auto a = std::chrono::steady_clock::now();
    fn();
    const auto b = std::chrono::steady_clock::now();
    ti = std::chrono::duration<double, std::milli>(b - a).count();
  }
  std::sort(t, t + 3);
  return t[1];
}

int thread_cap() {
  const char* env = std::getenv("YODO_THREADS");
  if (env == nullptr) return 1;
  const long v = std::strtol(env, nullptr, 10);
  return v >= 1 ? static_cast<int>(v) : 1;
}

// ---------------------------------------------------------------------------

struct AnalyzeConfig {
  std::string network;
  std::string target;
  std::vector<std::string> evidence;
  std::string format = "csv";
  int64_t top = 0;  // 0: absent
  bool inject = false;
};

int run_analyze(const AnalyzeConfig& cfg) {
  auto bn = load_bif_file(cfg.network);
  auto q = parse_query(bn, cfg.target, cfg.evidence);
  AnalyzeOptions opts;
  opts.inject_gradient_error = cfg.inject;
  auto rep = analyze_all(bn, q, opts);

  const auto fmt = cfg.format == "json" ? ReportFormat::json : ReportFormat::csv;
  std::optional<int64_t> top;
  if (cfg.top > 0) top = cfg.top;
  std::cout << serialize_report(bn, rep, fmt, top);

  std::cerr << "yodo: query " << query_str(bn, q) << " = " << fmt_g(rep.probability) << "\n";
  std::cerr << "yodo: " << bn.variable_count() << " variables, " << bn.parameter_count()
            << " parameters, induced width " << rep.stats.induced_width << ", "
            << rep.stats.forward_passes << " forward / " << rep.stats.backward_passes
            << " backward passes\n";
  for (const auto& w : rep.warnings) std::cerr << "yodo: warning: " << w << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyConfig {
  std::string network;
  std::string target;
  std::vector<std::string> evidence;
  int64_t sample = 0;  // 0: every parameter
  uint64_t seed = 0;
  bool inject = false;
};

int run_verify(const VerifyConfig& cfg) {
  constexpr double kDerivTol = 1e-5;
  constexpr double kCurveTol = 1e-9;

  auto bn = load_bif_file(cfg.network);
  auto q = parse_query(bn, cfg.target, cfg.evidence);
  AnalyzeOptions opts;
  opts.inject_gradient_error = cfg.inject;
  auto rep = analyze_all(bn, q, opts);

  // The independent evaluator: full-joint enumeration when the state space
  // allows it, otherwise elimination-based re-inference (still a from-scratch
  // computation per point, sharing no tape with the analysis).
  double joint = 1.0;
  for (int v = 0; v < bn.variable_count(); ++v) joint *= bn.card(v);
  const bool small = joint <= static_cast<double>(int64_t{1} << 20);
  const ProbabilityFn prob = small ? enumeration_probability_fn() : engine_probability_fn();
  std::cerr << "yodo: evaluator: " << (small ? "joint enumeration" : "elimination re-inference")
            << "\n";

  std::vector<size_t> picks;
  for (size_t i = 0; i < rep.rows.size(); ++i)
    if (!rep.rows[i].degenerate) picks.push_back(i);
  const size_t skipped = rep.rows.size() - picks.size();
  if (cfg.sample > 0 && static_cast<size_t>(cfg.sample) < picks.size()) {
    SplitMix64 rng(cfg.seed);
    for (size_t i = 0; i < static_cast<size_t>(cfg.sample); ++i) {
      const size_t j = i + static_cast<size_t>(rng.below(static_cast<int>(picks.size() - i)));
      std::swap(picks[i], picks[j]);
    }
    picks.resize(static_cast<size_t>(cfg.sample));
    std::sort(picks.begin(), picks.end());
  }

  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);

  double worst_deriv = 0.0, worst_curve = 0.0;
  std::string worst_deriv_param = "-", worst_curve_param = "-";
  for (size_t idx : picks) {
    const MetricRow& row = rep.rows[idx];
    const double fd = finite_difference_sensitivity(bn, q, row.param, 1e-5, prob);
    const double ddev = std::abs(row.fprime - fd) / std::max(1.0, std::abs(row.fprime));
    if (ddev > worst_deriv) {
      worst_deriv = ddev;
      worst_deriv_param = bn.param_name(row.param);
    }
    const auto curve = reinference_curve(bn, q, row.param, grid, prob);
    for (const auto& pt : curve) {
      const double expect = row.f.value_at(pt.theta);
      const double cdev = std::abs(pt.probability - expect) / std::max(1.0, std::abs(expect));
      if (cdev > worst_curve) {
        worst_curve = cdev;
        worst_curve_param = bn.param_name(row.param);
      }
    }
  }

  std::cout << "verify: checked " << picks.size() << " of " << rep.rows.size() << " parameters ("
            << skipped << " degenerate skipped)\n";
  std::cout << "verify: max derivative deviation " << fmt_g(worst_deriv) << " at "
            << worst_deriv_param << " (tolerance " << fmt_g(kDerivTol) << ")\n";
  std::cout << "verify: max curve deviation " << fmt_g(worst_curve) << " at " << worst_curve_param
            << " (tolerance " << fmt_g(kCurveTol) << ")\n";
  if (worst_deriv > kDerivTol || worst_curve > kCurveTol) {
    std::cout << "FAIL: "
              << (worst_deriv > kDerivTol
                      ? "derivative deviation " + fmt_g(worst_deriv) + " at " + worst_deriv_param
                      : "curve deviation " + fmt_g(worst_curve) + " at " + worst_curve_param)
              << " exceeds tolerance\n";
    return 1;
  }
  std::cout << "PASS\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchConfig {
  std::vector<std::string> files;
  bool synthetic = false;
  std::string kind = "polytree";
  int nodes = 100;
  int max_parents = 3;
  int max_states = 3;
  uint64_t seed = 0;
};

struct BenchRow {
  std::string name;
  bool failed = false;
  std::string error;
  int variables = 0;
  int64_t params = 0;
  int width = 0;
  std::string query;
  double analyze_ms = 0.0;
  double marg_ms = 0.0;
  double fd_est_ms = 0.0;
  double speedup = 0.0;
};

BenchRow bench_one(const std::string& label, const BayesianNetwork& bn, uint64_t seed) {
  BenchRow r;
  r.name = label;
  r.variables = bn.variable_count();
  r.params = bn.parameter_count();

  // Deterministic query choice: one target and one evidence variable with
  // random levels, drawn from the seed.
  SplitMix64 rng(seed ^ 0xb5ad4eceda1ce2a9ull);
  Query q;
  q.target_var = rng.below(bn.variable_count());
  q.target_state = rng.below(bn.card(q.target_var));
  if (bn.variable_count() > 1) {
    int ev = rng.below(bn.variable_count() - 1);
    if (ev >= q.target_var) ++ev;
    q.evidence = {{ev, rng.below(bn.card(ev))}};
  }
  r.query = query_str(bn, q);

  SensitivityReport rep;
  r.analyze_ms = median_of_3_ms([&] { rep = analyze_all(bn, q); });
  r.width = rep.stats.induced_width;
  const Assignment mask = q.full_mask();
  volatile double sink = 0.0;  // keeps the timed call from being optimized out
  r.marg_ms = median_of_3_ms([&] { sink = sink + ve_probability(bn, mask); });
  r.fd_est_ms = 2.0 * static_cast<double>(r.params) * r.marg_ms;
  r.speedup = r.analyze_ms > 0 ? r.fd_est_ms / r.analyze_ms : 0.0;
  return r;
}

int run_bench(const BenchConfig& cfg) {
  struct Job {
    std::string label;
    std::string file;  // empty: synthetic
  };
  std::vector<Job> jobs;
  for (const auto& f : cfg.files) jobs.push_back({f, f});
  if (cfg.synthetic) jobs.push_back({"synthetic", ""});
  if (jobs.empty()) throw std::invalid_argument("bench needs network files or --synthetic");

  SyntheticSpec spec;
  spec.kind = cfg.kind == "dag" ? SyntheticSpec::Kind::dag : SyntheticSpec::Kind::polytree;
  spec.nodes = cfg.nodes;
  spec.max_parents = cfg.max_parents;
  spec.max_states = cfg.max_states;
  spec.seed = cfg.seed;

  std::vector<BenchRow> rows(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
      try {
        BayesianNetwork bn =
            jobs[i].file.empty() ? synthesize(spec) : load_bif_file(jobs[i].file);
        rows[i] = bench_one(jobs[i].label, bn, cfg.seed + i);
      } catch (const std::exception& e) {
        rows[i].name = jobs[i].label;
        rows[i].failed = true;
        rows[i].error = e.what();
      }
    }
  };
  const int threads = std::min<int>(thread_cap(), static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::printf("%-28s %10s %8s %6s %12s %14s %10s\n", "network", "variables", "params", "width",
              "analyze_ms", "fd_baseline_ms", "speedup");
  bool any_ok = false;
  for (const auto& r : rows) {
    if (r.failed) {
      std::printf("%-28s failed: %s\n", r.name.c_str(), r.error.c_str());
      continue;
    }
    any_ok = true;
    std::printf("%-28s %10d %8lld %6d %12.3f %14.3f %9.1fx\n", r.name.c_str(), r.variables,
                static_cast<long long>(r.params), r.width, r.analyze_ms, r.fd_est_ms, r.speedup);
    std::cerr << "yodo: " << r.name << ": query " << r.query << ", single marginalization "
              << fmt_g(r.marg_ms) << " ms\n";
  }
  return any_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-way sensitivity analysis for discrete Bayesian networks"};
  app.require_subcommand(1);

  AnalyzeConfig ac;
  auto* analyze = app.add_subcommand("analyze", "rank every parameter of a query");
  analyze->add_option("-n,--network", ac.network, "network file (BIF dialect)")->required();
  analyze->add_option("-t,--target", ac.target, "target, as VAR=state")->required();
  analyze->add_option("-e,--evidence", ac.evidence, "evidence, as VAR=state (repeatable)");
  analyze->add_option("--format", ac.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val("csv");
  analyze->add_option("--top", ac.top, "keep only the N most sensitive rows")
      ->check(CLI::Range(int64_t{1}, std::numeric_limits<int64_t>::max()));
  analyze->add_flag("--inject-gradient-error", ac.inject)->group("");  // hidden test hook

  VerifyConfig vc;
  auto* verify = app.add_subcommand("verify", "check the analysis against finite differences");
  verify->add_option("-n,--network", vc.network, "network file (BIF dialect)")->required();
  verify->add_option("-t,--target", vc.target, "target, as VAR=state")->required();
  verify->add_option("-e,--evidence", vc.evidence, "evidence, as VAR=state (repeatable)");
  verify->add_option("--sample", vc.sample, "check only K randomly chosen parameters")
      ->check(CLI::Range(int64_t{1}, std::numeric_limits<int64_t>::max()));
  verify->add_option("--seed", vc.seed, "sampling seed")->default_val(0);
  verify->add_flag("--inject-gradient-error", vc.inject)->group("");  // hidden test hook

  BenchConfig bc;
  auto* bench = app.add_subcommand("bench", "time the analysis against an estimated baseline");
  bench->add_option("networks", bc.files, "network files to benchmark");
  bench->add_flag("--synthetic", bc.synthetic, "also benchmark one generated network");
  bench->add_option("--kind", bc.kind, "synthetic topology")
      ->check(CLI::IsMember({"polytree", "dag"}))
      ->default_val("polytree");
  bench->add_option("--nodes", bc.nodes, "synthetic node count")->default_val(100);
  bench->add_option("--max-parents", bc.max_parents)->default_val(3);
  bench->add_option("--max-states", bc.max_states)->default_val(3);
  bench->add_option("--seed", bc.seed, "generator and query seed")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(analyze)) return run_analyze(ac);
    if (app.got_subcommand(verify)) return run_verify(vc);
    return run_bench(bc);
  } catch (const AnalysisError& e) {
    std::cerr << "yodo: analysis error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "yodo: analysis error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "yodo: parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "yodo: invalid network:\n" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "yodo: error: " << e.what() << "\n";
    return 2;
  }
}
