#pragma once

#include <Eigen/Core>
#include <functional>

#include "scnet/rng.hpp"

namespace scnet {

/// Standard normal CDF.
double norm_cdf(double z);

/// Standard normal quantile, bisection-bracketed Newton on the erf-based
/// CDF, accurate to better than 1e-10 absolute. Throws std::domain_error
/// unless 0 < p < 1.
double inv_norm_cdf(double p);

/// Standard normal draw via inverse-CDF transform of a single uniform.
inline double draw_normal(Rng& rng) { return inv_norm_cdf(rng.uniform()); }

/// Feasible set {x : sum x = total, lower <= x <= upper}. An empty `upper`
/// means no caps.
struct ProjectionSpec {
  double total = 0.0;
  Eigen::ArrayXd lower;
  Eigen::ArrayXd upper;  // optional; empty means +inf
};

/// Euclidean projection onto the capped simplex of `spec`. Throws
/// std::invalid_argument when the spec is infeasible.
Eigen::ArrayXd project_capped_simplex(const Eigen::ArrayXd& v,
                                      const ProjectionSpec& spec);

/// Water-filling allocation n_i = max(floor_i, level - 1/eff_i) with the
/// level chosen so the allocations sum to `total`.
Eigen::ArrayXd water_level_bisect(const Eigen::ArrayXd& eff, double total,
                                  const Eigen::ArrayXd& floors);

/// Central finite differences of a scalar field.
Eigen::ArrayXd finite_diff_grad(
    const std::function<double(const Eigen::ArrayXd&)>& f,
    const Eigen::ArrayXd& x, double h);

}  // namespace scnet
