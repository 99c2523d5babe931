#include "scnet/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace scnet {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {
double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}
}  // namespace

double inv_norm_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("inv_norm_cdf: p must lie in (0, 1)");
  }
  double lo = -1.0, hi = 1.0;
  while (norm_cdf(lo) > p) lo *= 2.0;
  while (norm_cdf(hi) < p) hi *= 2.0;
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    // Newton step when it stays in the bracket, bisection otherwise.
    const double f = norm_cdf(z) - p;
    const double d = norm_pdf(z);
    double zn = d > 0.0 ? z - f / d : z;
    if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
    if (norm_cdf(zn) < p) {
      lo = zn;
    } else {
      hi = zn;
    }
    z = zn;
  }
  return z;
}

Eigen::ArrayXd project_capped_simplex(const Eigen::ArrayXd& v,
                                      const ProjectionSpec& spec) {
  const Eigen::Index n = v.size();
  if (spec.lower.size() != n ||
      (spec.upper.size() != 0 && spec.upper.size() != n)) {
    throw std::invalid_argument("project_capped_simplex: dimension mismatch");
  }
  const bool capped = spec.upper.size() != 0;
  const double sum_lower = spec.lower.sum();
  const double sum_upper = capped ? spec.upper.sum()
                                  : std::numeric_limits<double>::infinity();
  const double tol = 1e-12 * std::max(1.0, std::abs(spec.total));
  if (sum_lower > spec.total + tol || sum_upper < spec.total - tol) {
    throw std::invalid_argument("project_capped_simplex: infeasible spec");
  }
  if (capped && (spec.lower > spec.upper + tol).any()) {
    throw std::invalid_argument("project_capped_simplex: lower > upper");
  }

  auto clamped = [&](double shift) {
    Eigen::ArrayXd x = (v - shift).max(spec.lower);
    if (capped) x = x.min(spec.upper);
    return x;
  };

  // sum(clamped(shift)) is non-increasing in shift; bisect on the shift.
  double lo = (capped ? (v - spec.upper).minCoeff() : v.minCoeff() - 1.0) -
              std::abs(spec.total) - 1.0;
  double hi = (v - spec.lower).maxCoeff() + 1.0;
  while (clamped(lo).sum() < spec.total) lo -= std::max(1.0, hi - lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (clamped(mid).sum() >= spec.total) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double shift = 0.5 * (lo + hi);
  Eigen::ArrayXd x = clamped(shift);

  // Exact shift over the free set so the budget holds to round-off.
  int free_count = 0;
  double free_v = 0.0, bound_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool at_lower = x[i] <= spec.lower[i] + 1e-12;
    const bool at_upper = capped && x[i] >= spec.upper[i] - 1e-12;
    if (at_lower || at_upper) {
      bound_sum += at_lower ? spec.lower[i] : spec.upper[i];
    } else {
      ++free_count;
      free_v += v[i];
    }
  }
  if (free_count > 0) {
    shift = (free_v - (spec.total - bound_sum)) / free_count;
    x = clamped(shift);
  }
  return x;
}

Eigen::ArrayXd water_level_bisect(const Eigen::ArrayXd& eff, double total,
                                  const Eigen::ArrayXd& floors) {
  const Eigen::Index n = eff.size();
  if (floors.size() != n) {
    throw std::invalid_argument("water_level_bisect: dimension mismatch");
  }
  if ((eff <= 0.0).any()) {
    throw std::invalid_argument("water_level_bisect: efficiencies must be > 0");
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(total));
  if (floors.sum() > total + tol) {
    throw std::invalid_argument("water_level_bisect: budget below floors");
  }
  const Eigen::ArrayXd inv = eff.inverse();
  auto alloc = [&](double level) {
    return (level - inv).max(floors).eval();
  };
  double lo = (floors + inv).minCoeff();
  double hi = total + inv.maxCoeff() + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (alloc(mid).sum() <= total) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double level = 0.5 * (lo + hi);
  Eigen::ArrayXd x = alloc(level);

  // Solve the level exactly over the active coordinates.
  int active = 0;
  double inactive_sum = 0.0, inv_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (level - inv[i] > floors[i]) {
      ++active;
      inv_sum += inv[i];
    } else {
      inactive_sum += floors[i];
    }
  }
  if (active > 0) {
    level = (total - inactive_sum + inv_sum) / active;
    x = alloc(level);
  }
  return x;
}

Eigen::ArrayXd finite_diff_grad(
    const std::function<double(const Eigen::ArrayXd&)>& f,
    const Eigen::ArrayXd& x, double h) {
  Eigen::ArrayXd g(x.size());
  Eigen::ArrayXd p = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    p[i] = xi + h;
    const double fp = f(p);
    p[i] = xi - h;
    const double fm = f(p);
    p[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace scnet
