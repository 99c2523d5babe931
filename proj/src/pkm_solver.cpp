#include "scnet/pkm_solver.hpp"

#include <algorithm>
#include <cmath>

#include "scnet/metrics.hpp"

namespace scnet {

Eigen::ArrayXXd xi_threshold(const ChannelState& ch, const B2MProfile& b2m) {
  return b2m.slope * (ch.n_threshold * ch.spec_eff) + b2m.intercept;
}

std::vector<int> ua_argmax_rule(
    const Eigen::ArrayXXd& xi, const Eigen::ArrayXd& mu,
    const Eigen::ArrayXXd& n_thresh,
    const std::vector<std::vector<int>>& eligible) {
  const int U = static_cast<int>(xi.rows());
  std::vector<int> serving(U, -1);
  for (int i = 0; i < U; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j : eligible[i]) {
      const double score = xi(i, j) - mu[j] * n_thresh(i, j);
      if (score > best) {  // strict: ties keep the lowest BS id
        best = score;
        serving[i] = j;
      }
    }
  }
  return serving;
}

Eigen::ArrayXd update_multipliers(const Eigen::ArrayXd& mu,
                                  const std::vector<int>& serving,
                                  const Eigen::ArrayXXd& n_thresh,
                                  const Eigen::ArrayXd& budgets, int t,
                                  const PkmConfig& cfg) {
  const double delta = cfg.stepsize_coeff / t;
  Eigen::ArrayXd consumed = Eigen::ArrayXd::Zero(budgets.size());
  for (size_t i = 0; i < serving.size(); ++i) {
    if (serving[i] >= 0) {
      consumed[serving[i]] += n_thresh(static_cast<int>(i), serving[i]);
    }
  }
  return (mu - delta * (budgets - consumed)).max(0.0);
}

double dual_objective(const Eigen::ArrayXXd& xi, const Eigen::ArrayXd& mu,
                      const Eigen::ArrayXXd& n_thresh,
                      const Eigen::ArrayXd& budgets,
                      const std::vector<std::vector<int>>& eligible) {
  double value = (mu * budgets).sum();
  for (size_t i = 0; i < eligible.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j : eligible[i]) {
      best = std::max(best, xi(static_cast<int>(i), j) -
                                mu[j] * n_thresh(static_cast<int>(i), j));
    }
    if (!eligible[i].empty()) value += best;
  }
  return value;
}

void repair_overload(std::vector<int>& serving,
                     const Eigen::ArrayXXd& n_thresh,
                     const Eigen::ArrayXd& budgets,
                     const Eigen::ArrayXXd& score,
                     const std::vector<std::vector<int>>& eligible,
                     std::vector<int>& stranded,
                     std::vector<RepairAction>& repairs) {
  const int B = static_cast<int>(budgets.size());
  Eigen::ArrayXd consumed = Eigen::ArrayXd::Zero(B);
  for (size_t i = 0; i < serving.size(); ++i) {
    if (serving[i] >= 0) {
      consumed[serving[i]] += n_thresh(static_cast<int>(i), serving[i]);
    }
  }
  const double tol = 1e-9 * std::max(1.0, budgets.maxCoeff());
  for (;;) {
    // Most overloaded BS first.
    int worst = -1;
    double worst_over = tol;
    for (int j = 0; j < B; ++j) {
      const double over = consumed[j] - budgets[j];
      if (over > worst_over) {
        worst_over = over;
        worst = j;
      }
    }
    if (worst < 0) break;

    // Evict the member consuming the most bandwidth.
    int victim = -1;
    double victim_need = -1.0;
    for (size_t i = 0; i < serving.size(); ++i) {
      if (serving[i] != worst) continue;
      const double need = n_thresh(static_cast<int>(i), worst);
      if (need > victim_need) {
        victim_need = need;
        victim = static_cast<int>(i);
      }
    }
    if (victim < 0) break;  // over budget with no members: nothing movable

    consumed[worst] -= victim_need;
    int target = -1;
    double target_score = -std::numeric_limits<double>::infinity();
    for (int j : eligible[victim]) {
      if (j == worst) continue;
      const double need = n_thresh(victim, j);
      if (consumed[j] + need > budgets[j] + tol) continue;
      if (score(victim, j) > target_score) {
        target_score = score(victim, j);
        target = j;
      }
    }
    serving[victim] = target;
    repairs.push_back({victim, worst, target});
    if (target >= 0) {
      consumed[target] += n_thresh(victim, target);
    } else {
      stranded.push_back(victim);
    }
  }
  std::sort(stranded.begin(), stranded.end());
}

UaResult solve_ua_pkm(const Eigen::ArrayXXd& xi,
                      const Eigen::ArrayXXd& n_thresh,
                      const Eigen::ArrayXd& budgets,
                      const std::vector<std::vector<int>>& eligible,
                      const PkmConfig& cfg) {
  UaResult res;
  res.dual.mu = Eigen::ArrayXd::Zero(budgets.size());
  std::vector<int> prev;
  int stable = 0;
  for (int t = 1; t <= cfg.max_iters; ++t) {
    res.serving = ua_argmax_rule(xi, res.dual.mu, n_thresh, eligible);
    res.dual_trace.push_back(
        dual_objective(xi, res.dual.mu, n_thresh, budgets, eligible));
    res.iterations = t;
    stable = (res.serving == prev) ? stable + 1 : 1;
    prev = res.serving;
    if (stable >= cfg.stability_window) break;
    res.dual.mu =
        update_multipliers(res.dual.mu, res.serving, n_thresh, budgets, t, cfg);
  }
  for (size_t i = 0; i < eligible.size(); ++i) {
    if (eligible[i].empty()) res.stranded.push_back(static_cast<int>(i));
  }
  Eigen::ArrayXXd score = xi;
  for (Eigen::Index j = 0; j < score.cols(); ++j) {
    score.col(j) -= res.dual.mu[j] * n_thresh.col(j);
  }
  repair_overload(res.serving, n_thresh, budgets, score, eligible,
                  res.stranded, res.repairs);
  return res;
}

Eigen::ArrayXd solve_ba_pkm(int bs, const std::vector<int>& members,
                            const ChannelState& ch, const B2MProfile& b2m,
                            double budget) {
  const int m = static_cast<int>(members.size());
  Eigen::ArrayXd n(m);
  if (m == 0) return n;
  double residual = budget;
  int best = 0;
  double best_gain = -1.0;
  for (int k = 0; k < m; ++k) {
    const int i = members[k];
    n[k] = ch.n_threshold(i, bs);
    residual -= n[k];
    const double gain = b2m.slope(i, bs) * ch.spec_eff(i, bs);
    if (gain > best_gain) {
      best_gain = gain;
      best = k;
    }
  }
  // Repair admits loads within one rounding epsilon of the budget, so a
  // residual of -O(eps) is a full allocation, not an infeasibility.
  if (residual < -1e-9 * std::max(1.0, budget)) {
    throw std::invalid_argument("solve_ba_pkm: thresholds exceed the budget");
  }
  n[best] += std::max(residual, 0.0);
  return n;
}

std::pair<Assignment, SolverReport> solve_pkm(const ChannelState& ch,
                                              const B2MProfile& b2m,
                                              const MatchingProfile& matching,
                                              const Eigen::ArrayXd& budgets,
                                              const PkmConfig& cfg) {
  const int U = static_cast<int>(ch.sinr.rows());
  const int B = static_cast<int>(ch.sinr.cols());
  const Eigen::ArrayXXd xi = xi_threshold(ch, b2m);
  UaResult ua = solve_ua_pkm(xi, ch.n_threshold, budgets,
                             matching.pkm_eligible, cfg);

  Assignment assign;
  assign.serving = ua.serving;
  assign.bandwidth = Eigen::ArrayXXd::Zero(U, B);
  assign.stranded = ua.stranded;
  assign.feasible = ua.stranded.empty();
  const auto members = assign.members(B);
  for (int j = 0; j < B; ++j) {
    if (members[j].empty()) continue;
    const Eigen::ArrayXd n = solve_ba_pkm(j, members[j], ch, b2m, budgets[j]);
    for (size_t k = 0; k < members[j].size(); ++k) {
      assign.bandwidth(members[j][k], j) = n[static_cast<int>(k)];
    }
  }

  SolverReport report;
  report.dual_trace = std::move(ua.dual_trace);
  report.iterations = ua.iterations;
  report.repairs = std::move(ua.repairs);
  report.stm = stm_pkm(assign.serving, assign.bandwidth, ch, b2m);
  report.objective = report.stm;
  return {std::move(assign), std::move(report)};
}

}  // namespace scnet
