#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "scnet/assignment.hpp"
#include "scnet/semantics.hpp"
#include "scnet/topology.hpp"

namespace scnet {

struct PkmConfig {
  double stepsize_coeff = 0.8;  // delta(t) = stepsize_coeff / t
  int max_iters = 500;
  int stability_window = 10;  // consecutive unchanged-x iterations to stop
};

struct DualState {
  Eigen::ArrayXd mu;  // one nonnegative multiplier per BS
};

/// Per-link message rate at the threshold bandwidth,
/// xi_ij = slope_ij * (n^T_ij * e_ij) + intercept_ij.
Eigen::ArrayXXd xi_threshold(const ChannelState& ch, const B2MProfile& b2m);

/// serving[i] = argmax over the eligible set of xi_ij - mu_j * n^T_ij,
/// ties to the lowest BS id; -1 when the eligible set is empty.
std::vector<int> ua_argmax_rule(
    const Eigen::ArrayXXd& xi, const Eigen::ArrayXd& mu,
    const Eigen::ArrayXXd& n_thresh,
    const std::vector<std::vector<int>>& eligible);

/// Projected subgradient step on the per-BS multipliers.
Eigen::ArrayXd update_multipliers(const Eigen::ArrayXd& mu,
                                  const std::vector<int>& serving,
                                  const Eigen::ArrayXXd& n_thresh,
                                  const Eigen::ArrayXd& budgets, int t,
                                  const PkmConfig& cfg);

/// Dual objective D(mu) of the threshold-bandwidth association problem.
double dual_objective(const Eigen::ArrayXXd& xi, const Eigen::ArrayXd& mu,
                      const Eigen::ArrayXXd& n_thresh,
                      const Eigen::ArrayXd& budgets,
                      const std::vector<std::vector<int>>& eligible);

/// Moves the largest consumers off over-budget BSs to their best-scoring
/// eligible alternative with residual capacity; MUs with no such
/// alternative are stranded (serving set to -1).
void repair_overload(std::vector<int>& serving,
                     const Eigen::ArrayXXd& n_thresh,
                     const Eigen::ArrayXd& budgets,
                     const Eigen::ArrayXXd& score,
                     const std::vector<std::vector<int>>& eligible,
                     std::vector<int>& stranded,
                     std::vector<RepairAction>& repairs);

struct UaResult {
  std::vector<int> serving;
  DualState dual;
  std::vector<double> dual_trace;
  int iterations = 0;
  std::vector<RepairAction> repairs;
  std::vector<int> stranded;
};

/// Alternates the association rule and the multiplier update until the
/// association is stable, then repairs any budget overloads.
UaResult solve_ua_pkm(const Eigen::ArrayXXd& xi,
                      const Eigen::ArrayXXd& n_thresh,
                      const Eigen::ArrayXd& budgets,
                      const std::vector<std::vector<int>>& eligible,
                      const PkmConfig& cfg);

/// Per-BS bandwidth split: thresholds to every member, the whole residual
/// to the member with the largest slope * spectral efficiency (the linear
/// objective's optimum), ties to the lowest MU id. Returns one allocation
/// per member, summing to the budget.
Eigen::ArrayXd solve_ba_pkm(int bs, const std::vector<int>& members,
                            const ChannelState& ch, const B2MProfile& b2m,
                            double budget);

std::pair<Assignment, SolverReport> solve_pkm(const ChannelState& ch,
                                              const B2MProfile& b2m,
                                              const MatchingProfile& matching,
                                              const Eigen::ArrayXd& budgets,
                                              const PkmConfig& cfg);

}  // namespace scnet
