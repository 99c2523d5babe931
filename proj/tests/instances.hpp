// Shared construction of small random instances for oracle comparisons.
#pragma once

#include <Eigen/Core>

#include "scnet/rng.hpp"
#include "scnet/scenario.hpp"
#include "scnet/semantics.hpp"
#include "scnet/topology.hpp"

namespace test_instances {

struct Tiny {
  scnet::ChannelState channel;
  scnet::B2MProfile b2m;
  scnet::MatchingProfile matching;
  Eigen::ArrayXd budgets;
};

/// Synthetic channel with a bounded spectral-efficiency spread and budgets
/// close to the association floors. Keeping the per-BS residual small keeps
/// the joint problem in the regime where the association choice, not the
/// residual placement, carries the objective.
inline Tiny make_tiny(std::uint64_t seed, int U, int B, double tau,
                      double budget_slack = 1.3, double intercept = 1e5) {
  scnet::Rng rng(seed);
  Tiny t;
  t.channel.spec_eff.resize(U, B);
  t.channel.sinr.resize(U, B);
  t.channel.n_threshold.resize(U, B);
  t.b2m.slope.resize(U, B);
  t.b2m.intercept = Eigen::ArrayXXd::Constant(U, B, intercept);
  const double min_bit_rate = 1e4;
  for (int i = 0; i < U; ++i) {
    for (int j = 0; j < B; ++j) {
      const double e = rng.uniform(3.0, 5.0);
      t.channel.spec_eff(i, j) = e;
      t.channel.sinr(i, j) = std::pow(2.0, e) - 1.0;
      t.channel.n_threshold(i, j) = min_bit_rate / e;
      t.b2m.slope(i, j) = rng.uniform(0.8, 1.2);
    }
  }
  t.matching =
      scnet::make_matching(Eigen::ArrayXXd::Constant(U, B, tau), 0.5);
  t.budgets.resize(B);
  for (int j = 0; j < B; ++j) {
    t.budgets[j] = budget_slack * t.channel.n_threshold.col(j).mean() *
                   static_cast<double>(U) / B;
  }
  return t;
}

}  // namespace test_instances
