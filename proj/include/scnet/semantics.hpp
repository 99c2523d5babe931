#pragma once

#include <Eigen/Core>
#include <vector>

#include "scnet/rng.hpp"
#include "scnet/topology.hpp"

namespace scnet {

/// Affine bit-rate-to-message-rate map per link: S(r) = slope * r + intercept.
/// slope = 1 everywhere reproduces the canonical B2M form.
struct B2MProfile {
  Eigen::ArrayXXd slope;      // msg/bit
  Eigen::ArrayXXd intercept;  // msg/s

  static B2MProfile uniform(int num_mu, int num_bs, double slope = 1.0,
                            double intercept = 0.0);
  /// Slope from a piecewise-linear lookup on the link SINR (better channel,
  /// higher transformation rate).
  static B2MProfile sinr_scaled(const ChannelState& ch, double intercept = 0.0);
};

inline double b2m_pkm(double bit_rate, double slope, double intercept) {
  return slope * bit_rate + intercept;
}

inline double b2m_ikm(double bit_rate, double slope, double intercept,
                      double beta) {
  return beta * b2m_pkm(bit_rate, slope, intercept);
}

/// Per-link message rates S^P(n_ij * e_ij) for a bandwidth matrix n.
Eigen::ArrayXXd message_rates(const ChannelState& ch, const B2MProfile& b2m,
                              const Eigen::ArrayXXd& bandwidth);

double slope_from_sinr_db(double sinr_db);

enum class BetaMode {
  raw,       // unclipped Gaussian, used for chance-constraint calibration
  physical,  // clipped to [0, 1], used for reported STM
};

/// Gaussian matching-coefficient draw with mean tau, variance tau(1-tau).
double sample_beta(double tau, BetaMode mode, Rng& rng);

/// Mean of M Bernoulli(tau) matching indicators.
double binomial_matching_oracle(double tau, int M, Rng& rng);

struct MatchingProfile {
  Eigen::ArrayXXd tau;    // matching degree in [0, 1]
  Eigen::ArrayXXd sigma;  // sqrt(tau (1 - tau))
  double tau0 = 0.0;
  std::vector<std::vector<int>> pkm_eligible;  // B^P_i, ascending BS ids
  std::vector<std::vector<int>> ikm_eligible;  // B^I_i = {j : tau_ij >= tau0}
};

/// Eligibility from a directly supplied tau matrix. The PKM set is the
/// perfectly matched links (tau == 1).
MatchingProfile make_matching(const Eigen::ArrayXXd& tau, double tau0);

/// Eligibility from KB sets: tau_ij = |K_i n K_j| / |K_i|, PKM set by
/// subset inclusion.
MatchingProfile make_matching_from_kbs(const Topology& topo, double tau0);

}  // namespace scnet
