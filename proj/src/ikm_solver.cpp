#include "scnet/ikm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "scnet/metrics.hpp"
#include "scnet/numerics.hpp"
#include "scnet/pkm_solver.hpp"

namespace scnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct FbarParts {
  Eigen::ArrayXXd rates;   // S^P(n e)
  Eigen::ArrayXd row_dev;  // s_i = sum_j x sigma S
  double mean = 0.0;
  double spread = 0.0;     // sqrt(sum s_i^2)
};

FbarParts fbar_parts(const Eigen::ArrayXXd& x, const Eigen::ArrayXXd& bandwidth,
                     const MatchingProfile& matching, const ChannelState& ch,
                     const B2MProfile& b2m) {
  FbarParts p;
  p.rates = message_rates(ch, b2m, bandwidth);
  p.mean = (x * matching.tau * p.rates).sum();
  p.row_dev = (x * matching.sigma * p.rates).rowwise().sum();
  p.spread = std::sqrt(p.row_dev.square().sum());
  return p;
}

}  // namespace

double fbar(const Eigen::ArrayXXd& x, const Eigen::ArrayXXd& bandwidth,
            const MatchingProfile& matching, const ChannelState& ch,
            const B2MProfile& b2m, double alpha) {
  const FbarParts p = fbar_parts(x, bandwidth, matching, ch, b2m);
  return p.mean - inv_norm_cdf(alpha) * p.spread;
}

Eigen::ArrayXXd fbar_grad_x(const Eigen::ArrayXXd& x,
                            const Eigen::ArrayXXd& bandwidth,
                            const MatchingProfile& matching,
                            const ChannelState& ch, const B2MProfile& b2m,
                            double alpha) {
  const FbarParts p = fbar_parts(x, bandwidth, matching, ch, b2m);
  Eigen::ArrayXXd g = matching.tau * p.rates;
  if (p.spread > 0.0) {
    const double z = inv_norm_cdf(alpha);
    g -= ((matching.sigma * p.rates).colwise() * p.row_dev) * (z / p.spread);
  }
  return g;
}

Eigen::ArrayXXd fbar_grad_n(const Eigen::ArrayXXd& x,
                            const Eigen::ArrayXXd& bandwidth,
                            const MatchingProfile& matching,
                            const ChannelState& ch, const B2MProfile& b2m,
                            double alpha) {
  const FbarParts p = fbar_parts(x, bandwidth, matching, ch, b2m);
  const Eigen::ArrayXXd rate_slope = b2m.slope * ch.spec_eff;  // dS/dn
  Eigen::ArrayXXd g = x * matching.tau * rate_slope;
  if (p.spread > 0.0) {
    const double z = inv_norm_cdf(alpha);
    g -= ((x * matching.sigma * rate_slope).colwise() * p.row_dev) *
         (z / p.spread);
  }
  return g;
}

double barrier_objective(const Eigen::ArrayXXd& x, double r,
                         const Eigen::ArrayXd& budgets,
                         const Eigen::ArrayXXd& n_thresh,
                         const MatchingProfile& matching,
                         const ChannelState& ch, const B2MProfile& b2m,
                         double alpha) {
  double barrier = 0.0;
  for (Eigen::Index j = 0; j < budgets.size(); ++j) {
    const double slack = budgets[j] - (x.col(j) * n_thresh.col(j)).sum();
    if (!(slack > 0.0)) return kNegInf;
    barrier += std::log(slack);
  }
  return fbar(x, n_thresh, matching, ch, b2m, alpha) + r * barrier;
}

namespace {

/// Per-MU projection of each row onto the probability simplex restricted
/// to the MU's eligible BSs.
void project_rows(Eigen::ArrayXXd& x,
                  const std::vector<std::vector<int>>& eligible) {
  for (size_t i = 0; i < eligible.size(); ++i) {
    const auto& cols = eligible[i];
    if (cols.empty()) continue;
    Eigen::ArrayXd v(cols.size());
    for (size_t k = 0; k < cols.size(); ++k) {
      v[static_cast<Eigen::Index>(k)] = x(static_cast<int>(i), cols[k]);
    }
    ProjectionSpec spec;
    spec.total = 1.0;
    spec.lower = Eigen::ArrayXd::Zero(v.size());
    spec.upper = Eigen::ArrayXd::Ones(v.size());
    const Eigen::ArrayXd w = project_capped_simplex(v, spec);
    for (size_t k = 0; k < cols.size(); ++k) {
      x(static_cast<int>(i), cols[k]) = w[static_cast<Eigen::Index>(k)];
    }
  }
}

}  // namespace

RelaxedResult solve_relaxed_ua(const ChannelState& ch, const B2MProfile& b2m,
                               const MatchingProfile& matching,
                               const Eigen::ArrayXd& budgets,
                               const IkmConfig& cfg) {
  const int U = static_cast<int>(ch.sinr.rows());
  const int B = static_cast<int>(ch.sinr.cols());
  const auto& eligible = matching.ikm_eligible;

  RelaxedResult res;
  Eigen::ArrayXXd uniform = Eigen::ArrayXXd::Zero(U, B);
  for (int i = 0; i < U; ++i) {
    for (int j : eligible[i]) {
      uniform(i, j) = 1.0 / eligible[i].size();
    }
  }

  // The uniform point spreads weight onto very expensive links (cell-edge
  // floors can exceed a whole budget), so it may sit outside the budget
  // interior. Anchor on a repaired least-floor association and blend as far
  // toward uniform as the interior allows.
  std::vector<int> greedy(U, -1);
  for (int i = 0; i < U; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j : eligible[i]) {
      if (ch.n_threshold(i, j) < best) {
        best = ch.n_threshold(i, j);
        greedy[i] = j;
      }
    }
  }
  std::vector<int> stranded;
  std::vector<RepairAction> repairs;
  repair_overload(greedy, ch.n_threshold, budgets,
                  Eigen::ArrayXXd(-ch.n_threshold), eligible, stranded,
                  repairs);
  Eigen::ArrayXXd anchor = Eigen::ArrayXXd::Zero(U, B);
  for (int i = 0; i < U; ++i) {
    if (greedy[i] >= 0) {
      anchor(i, greedy[i]) = 1.0;
    } else {
      anchor.row(i) = uniform.row(i);
    }
  }

  auto interior = [&](const Eigen::ArrayXXd& w) {
    for (int j = 0; j < B; ++j) {
      if ((w.col(j) * ch.n_threshold.col(j)).sum() >= 0.999 * budgets[j]) {
        return false;
      }
    }
    return true;
  };
  res.weights = anchor;
  for (double eps : {1.0, 0.5, 0.25, 0.1, 0.03, 0.01, 0.003, 0.0}) {
    Eigen::ArrayXXd blend = (1.0 - eps) * anchor + eps * uniform;
    if (interior(blend)) {
      res.weights = std::move(blend);
      break;
    }
  }
  if (barrier_objective(res.weights, cfg.r_init, budgets, ch.n_threshold,
                        matching, ch, b2m, cfg.alpha) == kNegInf) {
    res.feasible = false;
    return res;
  }

  for (double r = cfg.r_init; r >= cfg.r_min; r *= cfg.r_decay) {
    double current = barrier_objective(res.weights, r, budgets, ch.n_threshold,
                                       matching, ch, b2m, cfg.alpha);
    for (int it = 0; it < cfg.inner_max_iters; ++it) {
      Eigen::ArrayXXd grad = fbar_grad_x(res.weights, ch.n_threshold, matching,
                                         ch, b2m, cfg.alpha);
      for (int j = 0; j < B; ++j) {
        const double slack =
            budgets[j] - (res.weights.col(j) * ch.n_threshold.col(j)).sum();
        grad.col(j) -= (r / slack) * ch.n_threshold.col(j);
      }
      const double gmax = grad.abs().maxCoeff();
      if (gmax == 0.0) break;
      double step = 0.25 / gmax;
      bool improved = false;
      for (int bt = 0; bt < 50; ++bt) {
        Eigen::ArrayXXd candidate = res.weights + step * grad;
        project_rows(candidate, eligible);
        const double value =
            barrier_objective(candidate, r, budgets, ch.n_threshold, matching,
                              ch, b2m, cfg.alpha);
        if (value > current) {
          res.weights = std::move(candidate);
          improved = value > current + cfg.inner_tol_rel *
                                           std::max(1.0, std::abs(current));
          current = value;
          ++res.iterations;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    res.r_trace.push_back(r);
    res.fbar_trace.push_back(
        fbar(res.weights, ch.n_threshold, matching, ch, b2m, cfg.alpha));
  }
  return res;
}

std::vector<int> round_ua(const Eigen::ArrayXXd& weights,
                          const std::vector<std::vector<int>>& eligible) {
  std::vector<int> serving(eligible.size(), -1);
  for (size_t i = 0; i < eligible.size(); ++i) {
    double best = -1.0;
    for (int j : eligible[i]) {
      if (weights(static_cast<int>(i), j) > best) {
        best = weights(static_cast<int>(i), j);
        serving[i] = j;
      }
    }
  }
  return serving;
}

Eigen::ArrayXXd solve_ba_ikm(const std::vector<int>& serving,
                             const ChannelState& ch, const B2MProfile& b2m,
                             const MatchingProfile& matching, double alpha,
                             const Eigen::ArrayXd& budgets,
                             const IkmConfig& cfg, bool* feasible) {
  const int U = static_cast<int>(ch.sinr.rows());
  const int B = static_cast<int>(ch.sinr.cols());
  if (feasible) *feasible = true;

  Assignment tmp;
  tmp.serving = serving;
  const auto members = tmp.members(B);
  const Eigen::ArrayXXd x = tmp.indicator(B);

  Eigen::ArrayXXd n = Eigen::ArrayXXd::Zero(U, B);
  for (int j = 0; j < B; ++j) {
    if (members[j].empty()) continue;
    double floors = 0.0;
    for (int i : members[j]) floors += ch.n_threshold(i, j);
    if (floors > budgets[j] * (1.0 + 1e-12)) {
      if (feasible) *feasible = false;
      for (int i : members[j]) n(i, j) = ch.n_threshold(i, j);
      continue;
    }
    const double extra = (budgets[j] - floors) / members[j].size();
    for (int i : members[j]) n(i, j) = ch.n_threshold(i, j) + extra;
  }

  auto objective = [&](const Eigen::ArrayXXd& bw) {
    return fbar(x, bw, matching, ch, b2m, alpha);
  };
  double current = objective(n);
  for (int sweep = 0; sweep < cfg.ba_max_sweeps; ++sweep) {
    const double sweep_start = current;
    for (int j = 0; j < B; ++j) {
      const int m = static_cast<int>(members[j].size());
      if (m < 2) continue;
      ProjectionSpec spec;
      spec.total = budgets[j];
      spec.lower.resize(m);
      for (int k = 0; k < m; ++k) {
        spec.lower[k] = ch.n_threshold(members[j][k], j);
      }
      if (spec.lower.sum() > spec.total * (1.0 + 1e-12)) continue;
      for (int it = 0; it < 200; ++it) {
        const Eigen::ArrayXXd grad =
            fbar_grad_n(x, n, matching, ch, b2m, alpha);
        Eigen::ArrayXd g(m), block(m);
        for (int k = 0; k < m; ++k) {
          g[k] = grad(members[j][k], j);
          block[k] = n(members[j][k], j);
        }
        const double gmax = g.abs().maxCoeff();
        if (gmax == 0.0) break;
        double step = budgets[j] / gmax;  // large first step; linear case
                                          // lands on the optimal vertex
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
          const Eigen::ArrayXd candidate =
              project_capped_simplex(block + step * g, spec);
          Eigen::ArrayXXd trial = n;
          for (int k = 0; k < m; ++k) trial(members[j][k], j) = candidate[k];
          const double value = objective(trial);
          if (value > current) {
            n = std::move(trial);
            moved = value > current + cfg.inner_tol_rel *
                                          std::max(1.0, std::abs(current));
            current = value;
            break;
          }
          step *= 0.5;
        }
        if (!moved) break;
      }
    }
    if (current <=
        sweep_start + cfg.inner_tol_rel * std::max(1.0, std::abs(sweep_start))) {
      break;
    }
  }
  return n;
}

std::pair<Assignment, SolverReport> solve_ikm(const ChannelState& ch,
                                              const B2MProfile& b2m,
                                              const MatchingProfile& matching,
                                              const Eigen::ArrayXd& budgets,
                                              const IkmConfig& cfg) {
  if (!(cfg.alpha > 0.5 && cfg.alpha < 1.0)) {
    throw std::invalid_argument("solve_ikm: alpha must lie in (1/2, 1)");
  }
  const int B = static_cast<int>(ch.sinr.cols());

  RelaxedResult relaxed =
      solve_relaxed_ua(ch, b2m, matching, budgets, cfg);

  Assignment assign;
  assign.serving = round_ua(relaxed.weights, matching.ikm_eligible);
  for (size_t i = 0; i < matching.ikm_eligible.size(); ++i) {
    if (matching.ikm_eligible[i].empty()) {
      assign.stranded.push_back(static_cast<int>(i));
    }
  }
  SolverReport report;
  repair_overload(assign.serving, ch.n_threshold, budgets, relaxed.weights,
                  matching.ikm_eligible, assign.stranded, report.repairs);

  bool ba_ok = true;
  assign.bandwidth = solve_ba_ikm(assign.serving, ch, b2m, matching, cfg.alpha,
                                  budgets, cfg, &ba_ok);
  assign.feasible = relaxed.feasible && ba_ok && assign.stranded.empty();

  report.objective = fbar(assign.indicator(B), assign.bandwidth, matching, ch,
                          b2m, cfg.alpha);
  report.stm = stm_pkm(assign.serving, assign.bandwidth, ch, b2m);
  report.r_trace = std::move(relaxed.r_trace);
  report.fbar_trace = std::move(relaxed.fbar_trace);
  report.iterations = relaxed.iterations;
  return {std::move(assign), std::move(report)};
}

}  // namespace scnet
