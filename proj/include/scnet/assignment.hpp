#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace scnet {

struct RepairAction {
  int mu = -1;
  int from_bs = -1;
  int to_bs = -1;  // -1 when the MU ends up stranded
};

/// Joint UA/BA outcome. `serving[i]` is the BS index for MU i, or -1 when
/// the MU is stranded; `bandwidth` is nonzero only on serving links.
struct Assignment {
  std::vector<int> serving;
  Eigen::ArrayXXd bandwidth;  // U x B, Hz
  bool feasible = true;
  std::vector<int> stranded;

  std::vector<std::vector<int>> members(int num_bs) const;
  Eigen::ArrayXXd indicator(int num_bs) const;  // binary x matrix
};

struct SolverReport {
  double objective = 0.0;  // STM^P for PKM, confidence bound for IKM
  double stm = 0.0;        // deterministic STM at the returned solution
  std::vector<double> dual_trace;  // PKM: D(mu) per iteration
  std::vector<double> r_trace;     // IKM: outer barrier weights
  std::vector<double> fbar_trace;  // IKM: bound after each outer iteration
  int iterations = 0;
  std::vector<RepairAction> repairs;
};

/// Serialize a report to JSON (traces included).
std::string report_json(const SolverReport& report);

}  // namespace scnet
