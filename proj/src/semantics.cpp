#include "scnet/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scnet/numerics.hpp"

namespace scnet {

B2MProfile B2MProfile::uniform(int num_mu, int num_bs, double slope,
                               double intercept) {
  B2MProfile p;
  p.slope = Eigen::ArrayXXd::Constant(num_mu, num_bs, slope);
  p.intercept = Eigen::ArrayXXd::Constant(num_mu, num_bs, intercept);
  return p;
}

double slope_from_sinr_db(double sinr_db) {
  // Anchors chosen so the rate ratio saturates at 1 for strong links.
  static const double pts[][2] = {
      {-5.0, 0.35}, {0.0, 0.60}, {3.0, 0.80}, {6.0, 0.95}, {9.0, 1.0}};
  const int n = 5;
  if (sinr_db <= pts[0][0]) return pts[0][1];
  if (sinr_db >= pts[n - 1][0]) return pts[n - 1][1];
  for (int k = 1; k < n; ++k) {
    if (sinr_db <= pts[k][0]) {
      const double t = (sinr_db - pts[k - 1][0]) / (pts[k][0] - pts[k - 1][0]);
      return pts[k - 1][1] + t * (pts[k][1] - pts[k - 1][1]);
    }
  }
  return pts[n - 1][1];
}

B2MProfile B2MProfile::sinr_scaled(const ChannelState& ch, double intercept) {
  B2MProfile p;
  p.slope.resize(ch.sinr.rows(), ch.sinr.cols());
  for (Eigen::Index i = 0; i < ch.sinr.rows(); ++i) {
    for (Eigen::Index j = 0; j < ch.sinr.cols(); ++j) {
      p.slope(i, j) = slope_from_sinr_db(10.0 * std::log10(ch.sinr(i, j)));
    }
  }
  p.intercept =
      Eigen::ArrayXXd::Constant(ch.sinr.rows(), ch.sinr.cols(), intercept);
  return p;
}

Eigen::ArrayXXd message_rates(const ChannelState& ch, const B2MProfile& b2m,
                              const Eigen::ArrayXXd& bandwidth) {
  return b2m.slope * bandwidth * ch.spec_eff + b2m.intercept;
}

double sample_beta(double tau, BetaMode mode, Rng& rng) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error("sample_beta: tau outside [0, 1]");
  }
  const double sigma = std::sqrt(tau * (1.0 - tau));
  const double beta = tau + sigma * draw_normal(rng);
  if (mode == BetaMode::physical) return std::clamp(beta, 0.0, 1.0);
  return beta;
}

double binomial_matching_oracle(double tau, int M, Rng& rng) {
  if (M < 1) throw std::domain_error("binomial_matching_oracle: M >= 1");
  long hits = 0;
  for (int m = 0; m < M; ++m) {
    if (rng.bernoulli(tau)) ++hits;
  }
  return static_cast<double>(hits) / M;
}

namespace {

MatchingProfile finish(MatchingProfile p, double tau0) {
  if (!(tau0 >= 0.0 && tau0 <= 1.0)) {
    throw std::domain_error("eligibility: tau0 outside [0, 1]");
  }
  p.tau0 = tau0;
  p.sigma = (p.tau * (1.0 - p.tau)).sqrt();
  const int U = static_cast<int>(p.tau.rows());
  const int B = static_cast<int>(p.tau.cols());
  p.ikm_eligible.assign(U, {});
  for (int i = 0; i < U; ++i) {
    for (int j = 0; j < B; ++j) {
      if (p.tau(i, j) >= tau0) p.ikm_eligible[i].push_back(j);
    }
  }
  return p;
}

}  // namespace

MatchingProfile make_matching(const Eigen::ArrayXXd& tau, double tau0) {
  MatchingProfile p;
  p.tau = tau;
  p = finish(std::move(p), tau0);
  const int U = static_cast<int>(tau.rows());
  const int B = static_cast<int>(tau.cols());
  p.pkm_eligible.assign(U, {});
  for (int i = 0; i < U; ++i) {
    for (int j = 0; j < B; ++j) {
      if (tau(i, j) >= 1.0 - 1e-12) p.pkm_eligible[i].push_back(j);
    }
  }
  return p;
}

MatchingProfile make_matching_from_kbs(const Topology& topo, double tau0) {
  const int U = topo.num_mu();
  const int B = topo.num_bs();
  MatchingProfile p;
  p.tau.resize(U, B);
  p.pkm_eligible.assign(U, {});
  for (int i = 0; i < U; ++i) {
    const auto& need = topo.mu[i].required_kbs;
    if (need.empty()) {
      throw std::invalid_argument("make_matching_from_kbs: MU " +
                                  std::to_string(i) + " requires no KBs");
    }
    for (int j = 0; j < B; ++j) {
      const auto& have = topo.bs[j].kbs;
      std::vector<int> common;
      std::set_intersection(need.begin(), need.end(), have.begin(), have.end(),
                            std::back_inserter(common));
      p.tau(i, j) = static_cast<double>(common.size()) / need.size();
      if (common.size() == need.size()) p.pkm_eligible[i].push_back(j);
    }
  }
  return finish(std::move(p), tau0);
}

}  // namespace scnet
