#include "scnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "scnet/ikm_solver.hpp"
#include "scnet/numerics.hpp"

namespace scnet {

double stm_pkm(const std::vector<int>& serving,
               const Eigen::ArrayXXd& bandwidth, const ChannelState& ch,
               const B2MProfile& b2m) {
  double stm = 0.0;
  for (size_t i = 0; i < serving.size(); ++i) {
    const int j = serving[i];
    if (j < 0) continue;
    const int u = static_cast<int>(i);
    stm += b2m_pkm(bandwidth(u, j) * ch.spec_eff(u, j), b2m.slope(u, j),
                   b2m.intercept(u, j));
  }
  return stm;
}

double McStats::quantile(double p) const {
  if (samples.empty()) return 0.0;
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * (sorted.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

McStats stm_ikm_mc(const std::vector<int>& serving,
                   const Eigen::ArrayXXd& bandwidth,
                   const Eigen::ArrayXXd& tau, const ChannelState& ch,
                   const B2MProfile& b2m, int samples, BetaMode mode,
                   std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("stm_ikm_mc: samples >= 1");
  Rng rng(seed);
  McStats stats;
  stats.samples.reserve(samples);
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    double stm = 0.0;
    for (size_t i = 0; i < serving.size(); ++i) {
      const int j = serving[i];
      if (j < 0) continue;
      const int u = static_cast<int>(i);
      const double beta = sample_beta(tau(u, j), mode, rng);
      stm += b2m_ikm(bandwidth(u, j) * ch.spec_eff(u, j), b2m.slope(u, j),
                     b2m.intercept(u, j), beta);
    }
    stats.samples.push_back(stm);
    sum += stm;
    sq += stm * stm;
  }
  stats.mean = sum / samples;
  stats.stddev = std::sqrt(std::max(0.0, sq / samples - stats.mean * stats.mean));
  return stats;
}

double chance_coverage(const std::vector<int>& serving,
                       const Eigen::ArrayXXd& bandwidth,
                       const MatchingProfile& matching, const ChannelState& ch,
                       const B2MProfile& b2m, double alpha, int samples,
                       std::uint64_t seed) {
  Assignment tmp;
  tmp.serving = serving;
  const double bound = fbar(tmp.indicator(static_cast<int>(ch.sinr.cols())),
                            bandwidth, matching, ch, b2m, alpha);
  const McStats stats = stm_ikm_mc(serving, bandwidth, matching.tau, ch, b2m,
                                   samples, BetaMode::raw, seed);
  long hits = 0;
  for (double s : stats.samples) {
    if (s >= bound) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

namespace {

void compositions(int parts, int quanta, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    current.push_back(quanta);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int q = 0; q <= quanta; ++q) {
    current.push_back(q);
    compositions(parts - 1, quanta - q, current, out);
    current.pop_back();
  }
}

}  // namespace

BruteForceResult brute_force_joint(const ChannelState& ch,
                                   const B2MProfile& b2m,
                                   const MatchingProfile& matching,
                                   const Eigen::ArrayXd& budgets,
                                   Objective objective, double alpha,
                                   int grid_levels) {
  const int U = static_cast<int>(ch.sinr.rows());
  const int B = static_cast<int>(ch.sinr.cols());
  if (U > 6 || B > 3 || grid_levels > 6 || grid_levels < 1) {
    throw std::invalid_argument("brute_force_joint: instance beyond budget");
  }
  const auto& eligible = objective == Objective::pkm_stm
                             ? matching.pkm_eligible
                             : matching.ikm_eligible;

  BruteForceResult best;
  best.objective = -std::numeric_limits<double>::infinity();

  std::vector<int> serving(U, -1);
  Eigen::ArrayXXd bandwidth = Eigen::ArrayXXd::Zero(U, B);

  // Evaluate every per-BS residual split for the fixed association map.
  std::function<void(int, const std::vector<std::vector<int>>&)> split_bs =
      [&](int j, const std::vector<std::vector<int>>& members) {
        if (j == B) {
          double value;
          if (objective == Objective::pkm_stm) {
            value = stm_pkm(serving, bandwidth, ch, b2m);
          } else {
            Assignment tmp;
            tmp.serving = serving;
            value = fbar(tmp.indicator(B), bandwidth, matching, ch, b2m, alpha);
          }
          if (value > best.objective) {
            best.objective = value;
            best.serving = serving;
            best.bandwidth = bandwidth;
          }
          return;
        }
        const int m = static_cast<int>(members[j].size());
        if (m == 0) {
          split_bs(j + 1, members);
          return;
        }
        double floors = 0.0;
        for (int i : members[j]) floors += ch.n_threshold(i, j);
        const double quantum = (budgets[j] - floors) / grid_levels;
        std::vector<std::vector<int>> splits;
        std::vector<int> scratch;
        compositions(m, grid_levels, scratch, splits);
        for (const auto& split : splits) {
          for (int k = 0; k < m; ++k) {
            bandwidth(members[j][k], j) =
                ch.n_threshold(members[j][k], j) + split[k] * quantum;
          }
          split_bs(j + 1, members);
        }
        for (int i : members[j]) bandwidth(i, j) = 0.0;
      };

  std::function<void(int)> assign_mu = [&](int i) {
    if (i == U) {
      std::vector<std::vector<int>> members(B);
      Eigen::ArrayXd consumed = Eigen::ArrayXd::Zero(B);
      for (int u = 0; u < U; ++u) {
        if (serving[u] >= 0) {
          members[serving[u]].push_back(u);
          consumed[serving[u]] += ch.n_threshold(u, serving[u]);
        }
      }
      if ((consumed > budgets * (1.0 + 1e-12)).any()) return;
      split_bs(0, members);
      return;
    }
    if (eligible[i].empty()) {
      assign_mu(i + 1);
      return;
    }
    for (int j : eligible[i]) {
      serving[i] = j;
      assign_mu(i + 1);
    }
    serving[i] = -1;
  };
  assign_mu(0);
  return best;
}

bool check_feasible(const Assignment& assign, const ChannelState& ch,
                    const MatchingProfile& matching,
                    const Eigen::ArrayXd& budgets, bool ikm_mode,
                    std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int U = static_cast<int>(ch.sinr.rows());
  const int B = static_cast<int>(ch.sinr.cols());
  const auto& eligible =
      ikm_mode ? matching.ikm_eligible : matching.pkm_eligible;
  if (static_cast<int>(assign.serving.size()) != U) {
    return fail("serving size mismatch");
  }
  for (int i = 0; i < U; ++i) {
    const int j = assign.serving[i];
    if (j < 0) {
      if (std::find(assign.stranded.begin(), assign.stranded.end(), i) ==
          assign.stranded.end()) {
        return fail("unserved MU " + std::to_string(i) + " not flagged");
      }
      continue;
    }
    if (std::find(eligible[i].begin(), eligible[i].end(), j) ==
        eligible[i].end()) {
      return fail("MU " + std::to_string(i) + " on an ineligible BS");
    }
    const double need = ch.n_threshold(i, j);
    if (assign.bandwidth(i, j) < need * (1.0 - 1e-9)) {
      return fail("MU " + std::to_string(i) + " below its bandwidth floor");
    }
  }
  for (int j = 0; j < B; ++j) {
    double used = 0.0;
    for (int i = 0; i < U; ++i) {
      if (assign.serving[i] == j) used += assign.bandwidth(i, j);
    }
    if (used > budgets[j] * (1.0 + 1e-9)) {
      return fail("BS " + std::to_string(j) + " over budget");
    }
  }
  return true;
}

}  // namespace scnet
