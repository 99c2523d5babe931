// Batch experiment driver: single runs, axis sweeps with CSV/SVG output,
// and a quick self-validation suite.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scnet/baselines.hpp"
#include "scnet/ikm_solver.hpp"
#include "scnet/metrics.hpp"
#include "scnet/numerics.hpp"
#include "scnet/pkm_solver.hpp"
#include "scnet/scenario.hpp"

namespace {

using namespace scnet;

constexpr const char* kCsvHeader =
    "seed,mus,bss,alpha,tau,method,objective,stm,runtime_s,iterations,"
    "stranded";

struct TrialRow {
  std::uint64_t seed = 0;
  int mus = 0;
  int bss = 0;
  double alpha = 0.0;
  double tau = 0.0;
  std::string method;
  double objective = 0.0;
  double stm = 0.0;
  double runtime_s = 0.0;
  int iterations = 0;
  int stranded = 0;
};

void write_rows(std::ostream& out, const std::vector<TrialRow>& rows) {
  out.precision(10);
  for (const TrialRow& r : rows) {
    out << r.seed << ',' << r.mus << ',' << r.bss << ',' << r.alpha << ','
        << r.tau << ',' << r.method << ',' << r.objective << ',' << r.stm
        << ',' << r.runtime_s << ',' << r.iterations << ',' << r.stranded
        << '\n';
  }
}

double mean_tau(const MatchingProfile& m) { return m.tau.mean(); }

/// One solver invocation on a freshly built instance.
TrialRow run_trial(const ScenarioConfig& cfg, std::uint64_t seed,
                   const std::string& method) {
  const Instance inst = build_instance(cfg, seed);
  TrialRow row;
  row.seed = seed;
  row.mus = inst.topo.num_mu();
  row.bss = inst.topo.num_bs();
  row.alpha = cfg.ikm.alpha;
  row.tau = mean_tau(inst.matching);
  row.method = method;

  const auto start = std::chrono::steady_clock::now();
  Assignment assign;
  SolverReport report;
  if (method == "pkm") {
    std::tie(assign, report) = solve_pkm(inst.channel, inst.b2m, inst.matching,
                                         inst.budgets, cfg.pkm);
  } else if (method == "ikm") {
    std::tie(assign, report) = solve_ikm(inst.channel, inst.b2m, inst.matching,
                                         inst.budgets, cfg.ikm);
  } else {
    const BaselineBa ba =
        method == "wf" ? BaselineBa::water_filling : BaselineBa::even;
    std::tie(assign, report) =
        solve_baseline(inst.channel, inst.b2m, inst.matching, inst.budgets, ba,
                       false, cfg.ikm.alpha);
  }
  row.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  row.objective = report.objective;
  row.stm = report.stm;
  row.iterations = report.iterations;
  row.stranded = static_cast<int>(assign.stranded.size());
  return row;
}

std::vector<TrialRow> run_trials(const ScenarioConfig& cfg,
                                 const std::string& method) {
  std::vector<std::future<TrialRow>> futs;
  futs.reserve(cfg.experiment.trials);
  for (int t = 0; t < cfg.experiment.trials; ++t) {
    const std::uint64_t seed = cfg.experiment.seed + static_cast<std::uint64_t>(t);
    futs.push_back(std::async(std::launch::async, run_trial, cfg, seed, method));
  }
  std::vector<TrialRow> rows;
  rows.reserve(futs.size());
  for (auto& f : futs) rows.push_back(f.get());  // deterministic trial order
  return rows;
}

double mean_objective(const std::vector<TrialRow>& rows) {
  double s = 0.0;
  for (const TrialRow& r : rows) s += r.objective;
  return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
}

std::vector<std::string> split_methods(const std::string& arg) {
  std::vector<std::string> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item != "pkm" && item != "ikm" && item != "wf" && item != "even") {
      throw CLI::ValidationError("--methods", "unknown method \"" + item +
                                                  "\" (pkm|ikm|wf|even)");
    }
    out.push_back(item);
  }
  if (out.empty()) throw CLI::ValidationError("--methods", "empty list");
  return out;
}

int cmd_run(const ScenarioConfig& cfg, const std::string& method,
            const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::vector<TrialRow> rows = run_trials(cfg, method);
  std::ofstream csv(out_dir + "/trials.csv");
  csv << kCsvHeader << '\n';
  write_rows(csv, rows);
  int stranded = 0;
  for (const TrialRow& r : rows) stranded += r.stranded;
  std::printf("%s: %d trials, mean objective %.6g msg/s, %d stranded MUs\n",
              method.c_str(), static_cast<int>(rows.size()),
              mean_objective(rows), stranded);
  std::printf("wrote %s/trials.csv\n", out_dir.c_str());
  return 0;
}

int cmd_sweep(ScenarioConfig cfg, const std::string& axis, double from,
              double to, double step, const std::string& methods_arg,
              const std::string& out_dir, bool plots) {
  const std::vector<std::string> methods = split_methods(methods_arg);
  std::vector<double> points;
  if (axis == "alpha") {
    points = {0.55, 0.75, 0.95};
  } else if (axis == "tau") {
    points = {0.3, 0.7};
  } else {
    if (step <= 0.0 || to < from) {
      throw CLI::ValidationError("--step", "need step > 0 and to >= from");
    }
    for (double v = from; v <= to + 1e-9; v += step) points.push_back(v);
  }

  std::filesystem::create_directories(out_dir);
  std::ofstream trials_csv(out_dir + "/trials.csv");
  trials_csv << kCsvHeader << '\n';
  std::ofstream agg_csv(out_dir + "/aggregate.csv");
  agg_csv << "axis,value,method,mean_objective,trials\n";
  agg_csv.precision(10);

  std::vector<std::vector<double>> xs(methods.size()), ys(methods.size());
  for (double v : points) {
    ScenarioConfig point_cfg = cfg;
    if (axis == "mus") {
      point_cfg.network.mu_count = static_cast<int>(std::lround(v));
    } else if (axis == "bss") {
      const int femto = static_cast<int>(std::lround(v)) -
                        cfg.network.macro_count - cfg.network.pico_count;
      if (femto < 0) {
        throw CLI::ValidationError("--from", "fewer BSs than macro+pico");
      }
      point_cfg.network.femto_count = femto;
    } else if (axis == "alpha") {
      point_cfg.ikm.alpha = v;
    } else {
      point_cfg.semantics.tau_mode = SemanticsConfig::TauMode::uniform;
      point_cfg.semantics.tau_value = v;
    }
    for (size_t m = 0; m < methods.size(); ++m) {
      const std::vector<TrialRow> rows = run_trials(point_cfg, methods[m]);
      write_rows(trials_csv, rows);
      const double agg = mean_objective(rows);
      agg_csv << axis << ',' << v << ',' << methods[m] << ',' << agg << ','
              << rows.size() << '\n';
      xs[m].push_back(v);
      ys[m].push_back(agg);
      std::printf("%s=%g %s: mean objective %.6g msg/s\n", axis.c_str(), v,
                  methods[m].c_str(), agg);
    }
  }
  if (plots) {
    write_svg_lines(out_dir + "/sweep.svg", methods, xs, ys, axis,
                    "mean objective (msg/s)");
    std::printf("wrote %s/sweep.svg\n", out_dir.c_str());
  }
  std::printf("wrote %s/trials.csv and %s/aggregate.csv\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

/// Small random instance for the validation oracles: unit-scale efficiencies
/// and near-unit slopes keep the heuristics inside their working regime.
Instance tiny_instance(std::uint64_t seed, int U, int B, double tau) {
  Rng rng(seed);
  Instance inst;
  inst.channel.spec_eff.resize(U, B);
  inst.b2m.slope.resize(U, B);
  for (int i = 0; i < U; ++i) {
    for (int j = 0; j < B; ++j) {
      inst.channel.spec_eff(i, j) = rng.uniform(3.0, 5.0);
      inst.b2m.slope(i, j) = rng.uniform(0.8, 1.2);
    }
  }
  inst.channel.sinr = (inst.channel.spec_eff * std::log(2.0)).exp() - 1.0;
  inst.channel.n_threshold = 1e4 / inst.channel.spec_eff;
  inst.b2m.intercept = Eigen::ArrayXXd::Constant(U, B, 1e5);
  inst.matching = make_matching(Eigen::ArrayXXd::Constant(U, B, tau), 0.5);
  inst.budgets.resize(B);
  for (int j = 0; j < B; ++j) {
    inst.budgets[j] =
        1.3 * inst.channel.n_threshold.col(j).mean() * U / B;
  }
  return inst;
}

int cmd_validate(std::uint64_t seed) {
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++failures;
  };

  // Analytic gradients of the confidence bound vs central differences.
  {
    double worst = 0.0;
    Rng rng(seed);
    for (int t = 0; t < 20; ++t) {
      const Instance inst = tiny_instance(seed + t, 4, 3, 0.7);
      Eigen::ArrayXXd x(4, 3), bw(4, 3);
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 3; ++j) {
          x(i, j) = rng.uniform(0.05, 0.9);
          bw(i, j) = inst.channel.n_threshold(i, j) * rng.uniform(1.0, 3.0);
        }
      }
      const double alpha = rng.uniform(0.6, 0.99);
      const Eigen::ArrayXXd gx =
          fbar_grad_x(x, bw, inst.matching, inst.channel, inst.b2m, alpha);
      auto fx = [&](const Eigen::ArrayXd& flat) {
        Eigen::ArrayXXd xv = flat.reshaped(4, 3).array();
        return fbar(xv, bw, inst.matching, inst.channel, inst.b2m, alpha);
      };
      Eigen::ArrayXd flat = x.reshaped().array();
      const Eigen::ArrayXd fd = finite_diff_grad(fx, flat, 1e-6);
      worst = std::max(
          worst, (Eigen::ArrayXd(gx.reshaped().array()) - fd).abs().maxCoeff() /
                     std::max(1.0, fd.abs().maxCoeff()));
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "worst relative deviation %.3g", worst);
    report("gradient check", worst <= 1e-5, buf);
  }

  // Empirical coverage of the confidence bound at alpha = 0.95.
  {
    bool ok = true;
    double lo = 1.0, hi = 0.0;
    for (int t = 0; t < 5; ++t) {
      const Instance inst = tiny_instance(seed + 100 + t, 6, 3, 0.5);
      IkmConfig cfg;
      const auto [a, r] =
          solve_ikm(inst.channel, inst.b2m, inst.matching, inst.budgets, cfg);
      const double cov =
          chance_coverage(a.serving, a.bandwidth, inst.matching, inst.channel,
                          inst.b2m, cfg.alpha, 50000, seed + 200 + t);
      lo = std::min(lo, cov);
      hi = std::max(hi, cov);
      if (cov < 0.935 || cov > 0.965) ok = false;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "coverage range [%.4f, %.4f]", lo, hi);
    report("chance calibration", ok, buf);
  }

  // Both solvers against the exhaustive grid oracle on tiny instances.
  {
    int pkm_wins = 0, ikm_wins = 0;
    const int n = 30;
    for (int t = 0; t < n; ++t) {
      const Instance tp = tiny_instance(seed + 300 + t, 5, 3, 1.0);
      PkmConfig pcfg;
      const auto [pa, pr] =
          solve_pkm(tp.channel, tp.b2m, tp.matching, tp.budgets, pcfg);
      const BruteForceResult pbf = brute_force_joint(
          tp.channel, tp.b2m, tp.matching, tp.budgets, Objective::pkm_stm,
          0.95, 5);
      if (pa.stranded.empty() && pr.stm >= 0.95 * pbf.objective) ++pkm_wins;

      const Instance ti = tiny_instance(seed + 400 + t, 5, 3, 0.7);
      IkmConfig icfg;
      const auto [ia, ir] =
          solve_ikm(ti.channel, ti.b2m, ti.matching, ti.budgets, icfg);
      const BruteForceResult ibf =
          brute_force_joint(ti.channel, ti.b2m, ti.matching, ti.budgets,
                            Objective::ikm_fbar, icfg.alpha, 5);
      if (ia.stranded.empty() && ir.objective >= 0.95 * ibf.objective) {
        ++ikm_wins;
      }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "PKM %d/%d, IKM %d/%d within 5%% of optimum",
                  pkm_wins, n, ikm_wins, n);
    report("oracle certification", pkm_wins >= 27 && ikm_wins >= 26, buf);
  }
  return failures;
}

int cmd_topology(const ScenarioConfig& cfg, std::uint64_t seed,
                 const std::string& out_path) {
  const Topology topo = generate_topology(cfg.network, seed);
  const std::string csv = topology_csv(topo);
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open " + out_path);
    out << csv;
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-communication network UA/BA experiment driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", method = "pkm";
  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  int trials_flag = 0;
  double alpha_flag = 0.0, tau_flag = -1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario JSON path");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](std::uint64_t v) {
          seed_flag = v;
          seed_set = true;
        },
        "base RNG seed (overrides config)");
    sub->add_option("--out", out_dir, "output directory");
  };

  CLI::App* run = app.add_subcommand("run", "solve one scenario over N trials");
  run->add_option("method", method, "pkm|ikm|wf|even")
      ->check(CLI::IsMember({"pkm", "ikm", "wf", "even"}));
  add_common(run);
  run->add_option("--trials", trials_flag, "trial count (overrides config)");
  run->add_option("--alpha", alpha_flag, "confidence level (overrides config)");
  run->add_option("--tau", tau_flag, "uniform matching degree (overrides config)");

  CLI::App* sweep = app.add_subcommand("sweep", "vary one axis and aggregate");
  std::string axis = "mus", methods_arg = "pkm,wf,even";
  double from = 100, to = 200, step = 20;
  bool plots = false;
  sweep->add_option("--axis", axis, "mus|bss|alpha|tau")
      ->check(CLI::IsMember({"mus", "bss", "alpha", "tau"}));
  sweep->add_option("--from", from, "first axis value (mus/bss)");
  sweep->add_option("--to", to, "last axis value (mus/bss)");
  sweep->add_option("--step", step, "axis increment (mus/bss)");
  sweep->add_option("--methods", methods_arg, "comma list of pkm|ikm|wf|even");
  sweep->add_flag("--plots", plots, "also write an SVG trend chart");
  add_common(sweep);
  sweep->add_option("--trials", trials_flag, "trials per point");

  CLI::App* validate =
      app.add_subcommand("validate", "run the built-in property suites");
  validate->add_option("--seed", seed_flag, "suite seed")->default_val(1);

  CLI::App* topo = app.add_subcommand("topology", "dump a generated topology");
  std::string topo_out;
  topo->add_option("--config", config_path, "scenario JSON path");
  topo->add_option("--seed", seed_flag, "generation seed");
  topo->add_option("--out", topo_out, "CSV path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig cfg;
    // Without a config, eligibility comes from the generated KB sets; a
    // uniform tau below 1 would leave the deterministic solver no eligible
    // links at all.
    cfg.semantics.tau_mode = SemanticsConfig::TauMode::kb;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (seed_set || topo->parsed()) cfg.experiment.seed = seed_flag;
    if (trials_flag > 0) cfg.experiment.trials = trials_flag;
    if (alpha_flag > 0.0) cfg.ikm.alpha = alpha_flag;
    if (tau_flag >= 0.0) {
      cfg.semantics.tau_mode = SemanticsConfig::TauMode::uniform;
      cfg.semantics.tau_value = tau_flag;
    }

    if (run->parsed()) return cmd_run(cfg, method, out_dir);
    if (sweep->parsed()) {
      return cmd_sweep(cfg, axis, from, to, step, methods_arg, out_dir, plots);
    }
    if (validate->parsed()) return cmd_validate(seed_flag);
    return cmd_topology(cfg, cfg.experiment.seed, topo_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
