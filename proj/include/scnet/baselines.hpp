#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "scnet/assignment.hpp"
#include "scnet/semantics.hpp"
#include "scnet/topology.hpp"

namespace scnet {

enum class BaselineBa { water_filling, even };

/// Strongest-SINR association restricted to the eligible sets, ties to the
/// lowest BS id.
std::vector<int> max_sinr_ua(const ChannelState& ch,
                             const std::vector<std::vector<int>>& eligible);

/// Even split of the budget; members whose share would fall below their
/// floor are pinned at the floor and the remainder is re-split evenly.
Eigen::ArrayXd evenly_distributed_ba(double budget,
                                     const Eigen::ArrayXd& floors);

/// Max-SINR UA (with overload repair ranked by SINR) followed by the
/// requested bandwidth split. In IKM mode the eligible sets are the
/// matching-threshold ones and the report carries the confidence bound at
/// `alpha` alongside the deterministic STM.
std::pair<Assignment, SolverReport> solve_baseline(
    const ChannelState& ch, const B2MProfile& b2m,
    const MatchingProfile& matching, const Eigen::ArrayXd& budgets,
    BaselineBa ba, bool ikm_mode, double alpha = 0.95);

}  // namespace scnet
