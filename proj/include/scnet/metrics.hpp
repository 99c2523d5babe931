#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "scnet/assignment.hpp"
#include "scnet/semantics.hpp"
#include "scnet/topology.hpp"

namespace scnet {

/// Deterministic system throughput in message: sum of served links'
/// message rates at the given bandwidths.
double stm_pkm(const std::vector<int>& serving, const Eigen::ArrayXXd& bandwidth,
               const ChannelState& ch, const B2MProfile& b2m);

struct McStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> samples;  // per-draw STM, in draw order

  double quantile(double p) const;
};

/// Monte-Carlo STM of the stochastic-matching network: each sample draws an
/// independent matching coefficient for every served link.
McStats stm_ikm_mc(const std::vector<int>& serving,
                   const Eigen::ArrayXXd& bandwidth,
                   const Eigen::ArrayXXd& tau, const ChannelState& ch,
                   const B2MProfile& b2m, int samples, BetaMode mode,
                   std::uint64_t seed);

/// Empirical probability that a raw-mode STM draw meets or exceeds the
/// confidence bound of the given solution at level alpha.
double chance_coverage(const std::vector<int>& serving,
                       const Eigen::ArrayXXd& bandwidth,
                       const MatchingProfile& matching, const ChannelState& ch,
                       const B2MProfile& b2m, double alpha, int samples,
                       std::uint64_t seed);

enum class Objective { pkm_stm, ikm_fbar };

struct BruteForceResult {
  std::vector<int> serving;
  Eigen::ArrayXXd bandwidth;
  double objective = 0.0;
};

/// Exhaustive joint UA/BA search for tiny instances: every eligible
/// association map crossed with per-BS splits of the residual bandwidth
/// into `grid_levels` equal quanta. Refuses instances beyond the
/// enumeration budget (U <= 6, B <= 3, grid_levels <= 6).
BruteForceResult brute_force_joint(const ChannelState& ch,
                                   const B2MProfile& b2m,
                                   const MatchingProfile& matching,
                                   const Eigen::ArrayXd& budgets,
                                   Objective objective, double alpha,
                                   int grid_levels);

/// Single-association, per-BS budget, and per-link floor checks. `why`
/// receives the first violated condition when non-null.
bool check_feasible(const Assignment& assign, const ChannelState& ch,
                    const MatchingProfile& matching,
                    const Eigen::ArrayXd& budgets, bool ikm_mode,
                    std::string* why = nullptr);

}  // namespace scnet
