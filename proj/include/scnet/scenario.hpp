#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include "scnet/ikm_solver.hpp"
#include "scnet/pkm_solver.hpp"
#include "scnet/semantics.hpp"
#include "scnet/topology.hpp"

namespace scnet {

struct SemanticsConfig {
  // tau source: a uniform value, the topology's KB sets, or a CSV matrix.
  enum class TauMode { uniform, kb, csv };
  TauMode tau_mode = TauMode::uniform;
  double tau_value = 0.5;
  std::string tau_csv;
  double tau0 = 0.5;

  // B2M parameters: constant slope or the SINR-dependent lookup.
  enum class SlopeMode { constant, sinr };
  SlopeMode slope_mode = SlopeMode::constant;
  double slope_value = 1.0;
  double intercept = 0.0;  // H^s, msg/s
  std::string hs_csv;
};

struct ExperimentConfig {
  int trials = 50;
  std::uint64_t seed = 1;
};

struct ScenarioConfig {
  GenConfig network;
  SemanticsConfig semantics;
  PkmConfig pkm;
  IkmConfig ikm;
  ExperimentConfig experiment;
};

/// Parse a JSON scenario file. Unknown keys are rejected with a message
/// naming the offending key. Missing sections keep their defaults.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);

/// A fully built problem instance: topology, channel, B2M profile,
/// matching profile, and per-BS budgets.
struct Instance {
  Topology topo;
  ChannelState channel;
  B2MProfile b2m;
  MatchingProfile matching;
  Eigen::ArrayXd budgets;
};

Instance build_instance(const ScenarioConfig& cfg, std::uint64_t seed);

/// Plain numeric CSV (comma separated, one matrix row per line).
Eigen::ArrayXXd load_matrix_csv(const std::string& path);
void save_matrix_csv(const std::string& path, const Eigen::ArrayXXd& m);

/// Minimal polyline chart for sweep outputs.
void write_svg_lines(const std::string& path,
                     const std::vector<std::string>& series_names,
                     const std::vector<std::vector<double>>& xs,
                     const std::vector<std::vector<double>>& ys,
                     const std::string& x_label, const std::string& y_label);

}  // namespace scnet
