#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "scnet/assignment.hpp"
#include "scnet/semantics.hpp"
#include "scnet/topology.hpp"

namespace scnet {

struct IkmConfig {
  double alpha = 0.95;       // semantic confidence level, > 1/2
  double r_init = 1.0;       // barrier weight schedule
  double r_decay = 0.2;
  double r_min = 1e-6;
  double inner_tol_rel = 1e-8;  // relative objective-improvement stop
  int inner_max_iters = 2000;
  int ba_max_sweeps = 50;
};

/// Confidence lower bound on the stochastic STM:
///   sum_ij x tau S^P(n e) - z_alpha * sqrt(sum_i (sum_j x sigma S^P(n e))^2).
/// Valid for both relaxed weights and binary indicators; may be negative.
double fbar(const Eigen::ArrayXXd& x, const Eigen::ArrayXXd& bandwidth,
            const MatchingProfile& matching, const ChannelState& ch,
            const B2MProfile& b2m, double alpha);

/// Analytic gradient of the bound with respect to the association weights
/// (zero contribution from the sqrt term at a degenerate variance).
Eigen::ArrayXXd fbar_grad_x(const Eigen::ArrayXXd& x,
                            const Eigen::ArrayXXd& bandwidth,
                            const MatchingProfile& matching,
                            const ChannelState& ch, const B2MProfile& b2m,
                            double alpha);

/// Analytic gradient with respect to the bandwidth matrix.
Eigen::ArrayXXd fbar_grad_n(const Eigen::ArrayXXd& x,
                            const Eigen::ArrayXXd& bandwidth,
                            const MatchingProfile& matching,
                            const ChannelState& ch, const B2MProfile& b2m,
                            double alpha);

/// Bound at threshold bandwidths plus r * sum_j log(slack_j). Returns
/// -infinity outside the strict interior of the budget constraints.
double barrier_objective(const Eigen::ArrayXXd& x, double r,
                         const Eigen::ArrayXd& budgets,
                         const Eigen::ArrayXXd& n_thresh,
                         const MatchingProfile& matching,
                         const ChannelState& ch, const B2MProfile& b2m,
                         double alpha);

struct RelaxedResult {
  Eigen::ArrayXXd weights;  // row-stochastic over each MU's eligible set
  bool feasible = true;
  std::vector<double> r_trace;
  std::vector<double> fbar_trace;  // bound (barrier off) after each outer step
  int iterations = 0;              // total inner ascent steps
};

/// Sequential unconstrained maximization: projected gradient ascent on the
/// barrier objective per outer barrier weight, per-MU simplex projections.
RelaxedResult solve_relaxed_ua(const ChannelState& ch, const B2MProfile& b2m,
                               const MatchingProfile& matching,
                               const Eigen::ArrayXd& budgets,
                               const IkmConfig& cfg);

/// Per-MU argmax weight, ties to the lowest BS id; -1 for empty rows.
std::vector<int> round_ua(const Eigen::ArrayXXd& weights,
                          const std::vector<std::vector<int>>& eligible);

/// Per-BS split of each budget maximizing the confidence bound by
/// block-coordinate projected gradient ascent over
/// {sum n = N_j, n >= n^T}; sweeps repeat until the bound stops improving.
Eigen::ArrayXXd solve_ba_ikm(const std::vector<int>& serving,
                             const ChannelState& ch, const B2MProfile& b2m,
                             const MatchingProfile& matching, double alpha,
                             const Eigen::ArrayXd& budgets,
                             const IkmConfig& cfg, bool* feasible);

std::pair<Assignment, SolverReport> solve_ikm(const ChannelState& ch,
                                              const B2MProfile& b2m,
                                              const MatchingProfile& matching,
                                              const Eigen::ArrayXd& budgets,
                                              const IkmConfig& cfg);

}  // namespace scnet
