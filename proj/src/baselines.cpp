#include "scnet/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "scnet/ikm_solver.hpp"
#include "scnet/metrics.hpp"
#include "scnet/numerics.hpp"
#include "scnet/pkm_solver.hpp"

namespace scnet {

std::vector<int> max_sinr_ua(const ChannelState& ch,
                             const std::vector<std::vector<int>>& eligible) {
  std::vector<int> serving(eligible.size(), -1);
  for (size_t i = 0; i < eligible.size(); ++i) {
    double best = -1.0;
    for (int j : eligible[i]) {
      if (ch.sinr(static_cast<int>(i), j) > best) {
        best = ch.sinr(static_cast<int>(i), j);
        serving[i] = j;
      }
    }
  }
  return serving;
}

Eigen::ArrayXd evenly_distributed_ba(double budget,
                                     const Eigen::ArrayXd& floors) {
  const int m = static_cast<int>(floors.size());
  if (m < 1) throw std::invalid_argument("evenly_distributed_ba: no members");
  if (floors.sum() > budget * (1.0 + 1e-12)) {
    throw std::invalid_argument("evenly_distributed_ba: floors exceed budget");
  }
  Eigen::ArrayXd n(m);
  std::vector<bool> pinned(m, false);
  for (;;) {
    double pinned_sum = 0.0;
    int free_count = 0;
    for (int k = 0; k < m; ++k) {
      if (pinned[k]) {
        pinned_sum += floors[k];
      } else {
        ++free_count;
      }
    }
    const double share =
        free_count > 0 ? (budget - pinned_sum) / free_count : 0.0;
    bool changed = false;
    for (int k = 0; k < m; ++k) {
      if (!pinned[k] && share < floors[k]) {
        pinned[k] = true;
        changed = true;
      }
    }
    if (!changed) {
      for (int k = 0; k < m; ++k) n[k] = pinned[k] ? floors[k] : share;
      return n;
    }
  }
}

std::pair<Assignment, SolverReport> solve_baseline(
    const ChannelState& ch, const B2MProfile& b2m,
    const MatchingProfile& matching, const Eigen::ArrayXd& budgets,
    BaselineBa ba, bool ikm_mode, double alpha) {
  const int U = static_cast<int>(ch.sinr.rows());
  const int B = static_cast<int>(ch.sinr.cols());
  const auto& eligible =
      ikm_mode ? matching.ikm_eligible : matching.pkm_eligible;

  Assignment assign;
  SolverReport report;
  assign.serving = max_sinr_ua(ch, eligible);
  for (int i = 0; i < U; ++i) {
    if (eligible[i].empty()) assign.stranded.push_back(i);
  }
  repair_overload(assign.serving, ch.n_threshold, budgets, ch.sinr, eligible,
                  assign.stranded, report.repairs);
  assign.feasible = assign.stranded.empty();

  assign.bandwidth = Eigen::ArrayXXd::Zero(U, B);
  const auto members = assign.members(B);
  for (int j = 0; j < B; ++j) {
    const int m = static_cast<int>(members[j].size());
    if (m == 0) continue;
    Eigen::ArrayXd floors(m), eff(m);
    for (int k = 0; k < m; ++k) {
      floors[k] = ch.n_threshold(members[j][k], j);
      eff[k] = ch.spec_eff(members[j][k], j);
    }
    const Eigen::ArrayXd n = ba == BaselineBa::water_filling
                                 ? water_level_bisect(eff, budgets[j], floors)
                                 : evenly_distributed_ba(budgets[j], floors);
    for (int k = 0; k < m; ++k) assign.bandwidth(members[j][k], j) = n[k];
  }

  report.stm = stm_pkm(assign.serving, assign.bandwidth, ch, b2m);
  report.objective = report.stm;
  if (ikm_mode) {
    report.objective = fbar(assign.indicator(B), assign.bandwidth, matching,
                            ch, b2m, alpha);
  }
  return {std::move(assign), std::move(report)};
}

}  // namespace scnet
