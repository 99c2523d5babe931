// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are pinned here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "instances.hpp"
#include "oracles.hpp"
#include "scnet/baselines.hpp"
#include "scnet/ikm_solver.hpp"
#include "scnet/metrics.hpp"
#include "scnet/numerics.hpp"
#include "scnet/pkm_solver.hpp"
#include "scnet/scenario.hpp"

using namespace scnet;

namespace {

int g_failures = 0;
long g_feasibility_checks = 0;
long g_feasibility_violations = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str());
  if (!pass) ++g_failures;
}

void track_feasibility(const Assignment& a, const ChannelState& ch,
                       const MatchingProfile& m, const Eigen::ArrayXd& budgets,
                       bool ikm_mode) {
  ++g_feasibility_checks;
  if (!check_feasible(a, ch, m, budgets, ikm_mode)) ++g_feasibility_violations;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Reference network of the evaluation section: 16 BSs, 2 MHz budgets,
/// knowledge-base driven eligibility.
ScenarioConfig reference_config(int mus) {
  ScenarioConfig cfg;
  cfg.network.mu_count = mus;
  cfg.semantics.tau_mode = SemanticsConfig::TauMode::kb;
  return cfg;
}

/// Smaller mixed network for the stochastic-solver criteria.
ScenarioConfig stochastic_config(double tau, double tau0) {
  ScenarioConfig cfg;
  cfg.network.macro_count = 1;
  cfg.network.pico_count = 2;
  cfg.network.femto_count = 5;
  cfg.network.mu_count = 40;
  cfg.semantics.tau_value = tau;
  cfg.semantics.tau0 = tau0;
  cfg.semantics.slope_mode = SemanticsConfig::SlopeMode::sinr;
  return cfg;
}

// 1. Mean STM ordering PKM > water-filling > even split on 50 reference
//    instances with a unit bit-to-message slope, gaps >= 2%, under 5 min.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> pkm, wf, even;
  for (int t = 0; t < 50; ++t) {
    const Instance inst = build_instance(reference_config(200), 1000 + t);
    PkmConfig cfg;
    const auto [pa, pr] =
        solve_pkm(inst.channel, inst.b2m, inst.matching, inst.budgets, cfg);
    track_feasibility(pa, inst.channel, inst.matching, inst.budgets, false);
    pkm.push_back(pr.stm);
    const auto [wa, wr] =
        solve_baseline(inst.channel, inst.b2m, inst.matching, inst.budgets,
                       BaselineBa::water_filling, false);
    track_feasibility(wa, inst.channel, inst.matching, inst.budgets, false);
    wf.push_back(wr.stm);
    const auto [ea, er] =
        solve_baseline(inst.channel, inst.b2m, inst.matching, inst.budgets,
                       BaselineBa::even, false);
    track_feasibility(ea, inst.channel, inst.matching, inst.budgets, false);
    even.push_back(er.stm);
  }
  const double mp = mean(pkm), mw = mean(wf), me = mean(even);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const bool order = mp > mw * 1.02 && mw > me * 1.02;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "method ordering: PKM %.4g, water-filling %.4g, even %.4g "
                "msg/s, gaps %+.3f%% / %+.3f%%, %.1f s",
                mp, mw, me, 100.0 * (mp - mw) / mw, 100.0 * (mw - me) / me,
                secs);
  report(1, order && secs < 300.0, buf);
}

// 2. Saturation: PKM mean STM at 200 MUs within 5% of the 140-MU value.
void criterion_2() {
  double stm140 = 0.0, stm200 = 0.0;
  for (int mus = 100; mus <= 200; mus += 20) {
    std::vector<double> stms;
    for (int t = 0; t < 40; ++t) {
      const Instance inst = build_instance(reference_config(mus), 2000 + t);
      PkmConfig cfg;
      const auto [a, r] =
          solve_pkm(inst.channel, inst.b2m, inst.matching, inst.budgets, cfg);
      track_feasibility(a, inst.channel, inst.matching, inst.budgets, false);
      stms.push_back(r.stm);
    }
    if (mus == 140) stm140 = mean(stms);
    if (mus == 200) stm200 = mean(stms);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "saturation: mean STM %.4g at 140 MUs, %.4g at 200 MUs "
                "(%.2f%% apart)",
                stm140, stm200, 100.0 * std::abs(stm200 - stm140) / stm140);
  report(2, std::abs(stm200 - stm140) <= 0.05 * stm140, buf);
}

// 3. Mean confidence bound decreases in alpha on identical instances.
void criterion_3() {
  std::vector<double> f55, f75, f95;
  for (int t = 0; t < 10; ++t) {
    const Instance inst = build_instance(stochastic_config(0.5, 0.5), 3000 + t);
    for (double alpha : {0.55, 0.75, 0.95}) {
      IkmConfig cfg;
      cfg.alpha = alpha;
      const auto [a, r] =
          solve_ikm(inst.channel, inst.b2m, inst.matching, inst.budgets, cfg);
      track_feasibility(a, inst.channel, inst.matching, inst.budgets, true);
      if (alpha == 0.55) f55.push_back(r.objective);
      if (alpha == 0.75) f75.push_back(r.objective);
      if (alpha == 0.95) f95.push_back(r.objective);
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "confidence-level ordering: mean bound %.6g (0.55) > %.6g "
                "(0.75) > %.6g (0.95)",
                mean(f55), mean(f75), mean(f95));
  report(3, mean(f55) > mean(f75) && mean(f75) > mean(f95), buf);
}

// 4. Mean confidence bound at tau = 0.7 exceeds tau = 0.3.
void criterion_4() {
  std::vector<double> f70, f30;
  for (int t = 0; t < 10; ++t) {
    for (double tau : {0.3, 0.7}) {
      const Instance inst =
          build_instance(stochastic_config(tau, 0.2), 4000 + t);
      IkmConfig cfg;
      const auto [a, r] =
          solve_ikm(inst.channel, inst.b2m, inst.matching, inst.budgets, cfg);
      track_feasibility(a, inst.channel, inst.matching, inst.budgets, true);
      (tau == 0.7 ? f70 : f30).push_back(r.objective);
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "matching-degree ordering: mean bound %.6g (tau 0.7) > %.6g "
                "(tau 0.3)",
                mean(f70), mean(f30));
  report(4, mean(f70) > mean(f30), buf);
}

// 5. Cross-comparison: at tau = 0.5 the stochastic bound sits strictly below
//    the deterministic throughput on every instance; at tau = 1 the two
//    solvers agree within 1%.
void criterion_5() {
  bool below = true, agree = true;
  double worst_gap = 0.0;
  for (int t = 0; t < 20; ++t) {
    // Matched pair: same channel and slopes, matching degree 0.5 vs 1.
    const test_instances::Tiny half =
        test_instances::make_tiny(5000 + t, 5, 3, 0.5, 2.5);
    const test_instances::Tiny sure =
        test_instances::make_tiny(5000 + t, 5, 3, 1.0, 2.5);
    PkmConfig pcfg;
    const auto [pa, pr] =
        solve_pkm(sure.channel, sure.b2m, sure.matching, sure.budgets, pcfg);
    track_feasibility(pa, sure.channel, sure.matching, sure.budgets, false);
    IkmConfig icfg;
    const auto [ia, ir] =
        solve_ikm(half.channel, half.b2m, half.matching, half.budgets, icfg);
    track_feasibility(ia, half.channel, half.matching, half.budgets, true);
    if (!(ir.objective < pr.stm)) below = false;

    const auto [sa, sr] =
        solve_ikm(sure.channel, sure.b2m, sure.matching, sure.budgets, icfg);
    track_feasibility(sa, sure.channel, sure.matching, sure.budgets, true);
    const double gap = std::abs(sr.objective - pr.stm) / pr.stm;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 0.01) agree = false;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "solver gap: bound below deterministic STM on all instances: "
                "%s; full-matching agreement worst gap %.3f%%",
                below ? "yes" : "no", 100.0 * worst_gap);
  report(5, below && agree, buf);
}

// 6. Chance calibration: empirical coverage of the bound within 0.01 of
//    alpha = 0.95 over 1e5 raw Monte-Carlo samples, 20 assignments.
void criterion_6() {
  bool ok = true;
  double lo = 1.0, hi = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Instance inst = build_instance(stochastic_config(0.5, 0.5), 6000 + t);
    IkmConfig cfg;
    const auto [a, r] =
        solve_ikm(inst.channel, inst.b2m, inst.matching, inst.budgets, cfg);
    track_feasibility(a, inst.channel, inst.matching, inst.budgets, true);
    const double cov =
        chance_coverage(a.serving, a.bandwidth, inst.matching, inst.channel,
                        inst.b2m, cfg.alpha, 100000, 6100 + t);
    lo = std::min(lo, cov);
    hi = std::max(hi, cov);
    if (cov < 0.94 || cov > 0.96) ok = false;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "chance calibration: coverage range [%.4f, %.4f] vs target "
                "[0.94, 0.96]",
                lo, hi);
  report(6, ok, buf);
}

// 7. Oracle certification on 100 tiny instances, 5-level BA grid.
void criterion_7() {
  int pkm_wins = 0, ikm_wins = 0;
  for (int t = 0; t < 100; ++t) {
    const test_instances::Tiny tp = test_instances::make_tiny(7000 + t, 5, 3, 1.0);
    PkmConfig pcfg;
    const auto [pa, pr] =
        solve_pkm(tp.channel, tp.b2m, tp.matching, tp.budgets, pcfg);
    track_feasibility(pa, tp.channel, tp.matching, tp.budgets, false);
    const BruteForceResult pbf = brute_force_joint(
        tp.channel, tp.b2m, tp.matching, tp.budgets, Objective::pkm_stm, 0.95, 5);
    if (pa.stranded.empty() && pr.stm >= 0.95 * pbf.objective) ++pkm_wins;

    const test_instances::Tiny ti = test_instances::make_tiny(7500 + t, 5, 3, 0.7);
    IkmConfig icfg;
    const auto [ia, ir] =
        solve_ikm(ti.channel, ti.b2m, ti.matching, ti.budgets, icfg);
    track_feasibility(ia, ti.channel, ti.matching, ti.budgets, true);
    const BruteForceResult ibf =
        brute_force_joint(ti.channel, ti.b2m, ti.matching, ti.budgets,
                          Objective::ikm_fbar, icfg.alpha, 5);
    if (ia.stranded.empty() && ir.objective >= 0.95 * ibf.objective) ++ikm_wins;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "oracle certification: PKM within 5%% of optimum on %d/100 "
                "(need 90), IKM on %d/100 (need 85)",
                pkm_wins, ikm_wins);
  report(7, pkm_wins >= 90 && ikm_wins >= 85, buf);
}

// 8. Analytic gradient of the bound vs central differences, 100 points.
void criterion_8() {
  double worst = 0.0;
  Rng rng(8000);
  for (int t = 0; t < 100; ++t) {
    const test_instances::Tiny tiny =
        test_instances::make_tiny(8000 + t, 4, 3, 0.7);
    Eigen::ArrayXXd x(4, 3), bw(4, 3);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 3; ++j) {
        x(i, j) = rng.uniform(0.05, 0.9);
        bw(i, j) = tiny.channel.n_threshold(i, j) * rng.uniform(1.0, 3.0);
      }
    }
    const double alpha = rng.uniform(0.6, 0.99);
    const Eigen::ArrayXXd gx =
        fbar_grad_x(x, bw, tiny.matching, tiny.channel, tiny.b2m, alpha);
    auto fx = [&](const Eigen::ArrayXd& flat) {
      Eigen::ArrayXXd xv = flat.reshaped(4, 3).array();
      return fbar(xv, bw, tiny.matching, tiny.channel, tiny.b2m, alpha);
    };
    Eigen::ArrayXd flat_x = x.reshaped().array();
    const Eigen::ArrayXd fd_x = finite_diff_grad(fx, flat_x, 1e-6);
    worst = std::max(
        worst, (Eigen::ArrayXd(gx.reshaped().array()) - fd_x).abs().maxCoeff() /
                   std::max(1.0, fd_x.abs().maxCoeff()));

    const Eigen::ArrayXXd gn =
        fbar_grad_n(x, bw, tiny.matching, tiny.channel, tiny.b2m, alpha);
    auto fn = [&](const Eigen::ArrayXd& flat) {
      Eigen::ArrayXXd nv = flat.reshaped(4, 3).array();
      return fbar(x, nv, tiny.matching, tiny.channel, tiny.b2m, alpha);
    };
    Eigen::ArrayXd flat_n = bw.reshaped().array();
    const Eigen::ArrayXd fd_n = finite_diff_grad(fn, flat_n, 1e-3);
    worst = std::max(
        worst, (Eigen::ArrayXd(gn.reshaped().array()) - fd_n).abs().maxCoeff() /
                   std::max(1e-6, fd_n.abs().maxCoeff()));
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "gradient check: worst relative deviation %.3g (limit 1e-5)",
                worst);
  report(8, worst <= 1e-5, buf);
}

// 9. Numeric primitives: quantile value, projection optimality, and
//    water-filling budget exactness over 1000 random cases each.
void criterion_9() {
  const bool quantile_ok =
      std::abs(inv_norm_cdf(0.95) - 1.644854) <= 1e-6 &&
      std::abs(inv_norm_cdf(0.95) - oracles::inv_norm_cdf_bisect(0.95)) <= 1e-6;

  Rng rng(9000);
  bool projection_ok = true;
  for (int t = 0; t < 1000 && projection_ok; ++t) {
    const int n = 2 + static_cast<int>(rng.integer(6));
    ProjectionSpec spec;
    spec.lower.resize(n);
    spec.upper.resize(n);
    for (int i = 0; i < n; ++i) {
      spec.lower[i] = rng.uniform(0.0, 0.5);
      spec.upper[i] = spec.lower[i] + rng.uniform(0.1, 2.0);
    }
    spec.total = rng.uniform(spec.lower.sum(), spec.upper.sum());
    Eigen::ArrayXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(-3.0, 3.0);
    const Eigen::ArrayXd x = project_capped_simplex(v, spec);
    if (std::abs(x.sum() - spec.total) > 1e-8 ||
        (x < spec.lower - 1e-9).any() || (x > spec.upper + 1e-9).any()) {
      projection_ok = false;
    }
    const double dist = (v - x).matrix().norm();
    for (int k = 0; k < 20; ++k) {
      Eigen::ArrayXd z(n);
      for (int i = 0; i < n; ++i) z[i] = rng.uniform(-3.0, 3.0);
      const Eigen::ArrayXd y = project_capped_simplex(z, spec);
      if (dist > (v - y).matrix().norm() + 1e-7) projection_ok = false;
    }
  }

  bool water_ok = true;
  for (int t = 0; t < 1000 && water_ok; ++t) {
    const int n = 1 + static_cast<int>(rng.integer(8));
    Eigen::ArrayXd e(n), floors(n);
    for (int i = 0; i < n; ++i) {
      e[i] = rng.uniform(0.05, 8.0);
      floors[i] = rng.uniform(0.0, 1.0);
    }
    const double total = floors.sum() + rng.uniform(0.0, 10.0);
    const Eigen::ArrayXd x = water_level_bisect(e, total, floors);
    if (std::abs(x.sum() - total) > 1e-9 * std::max(1.0, total) ||
        (x < floors - 1e-12).any()) {
      water_ok = false;
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "numeric primitives: quantile %s, projection suite %s, "
                "water-filling suite %s",
                quantile_ok ? "ok" : "off", projection_ok ? "ok" : "off",
                water_ok ? "ok" : "off");
  report(9, quantile_ok && projection_ok && water_ok, buf);
}

// 10. Standardized binomial matching sums vs the standard normal (KS).
void criterion_10() {
  bool all_ok = true;
  char buf[256];
  std::string detail = "binomial normality:";
  for (double tau : {0.2, 0.5, 0.8}) {
    int passes = 0;
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(10000 + trial);
      const int M = 10000, n = 300;
      std::vector<double> zs(n);
      for (int k = 0; k < n; ++k) {
        const double m = binomial_matching_oracle(tau, M, rng);
        zs[k] = (m - tau) / std::sqrt(tau * (1.0 - tau) / M);
      }
      if (oracles::ks_pvalue(oracles::ks_statistic_normal(zs), n) > 0.01) {
        ++passes;
      }
    }
    std::snprintf(buf, sizeof buf, " tau %.1f -> %d/20", tau, passes);
    detail += buf;
    if (passes < 18) all_ok = false;
  }
  report(10, all_ok, detail + " (need 18/20 each)");
}

// 11. Every assignment produced above satisfied association, budget, and
//     floor constraints.
void criterion_11() {
  char buf[256];
  std::snprintf(buf, sizeof buf, "feasibility: %ld violations in %ld checks",
                g_feasibility_violations, g_feasibility_checks);
  report(11, g_feasibility_violations == 0 && g_feasibility_checks > 0, buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("%d of 11 criteria failed\n", g_failures);
  return g_failures;
}
