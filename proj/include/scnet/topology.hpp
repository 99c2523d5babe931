#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "scnet/rng.hpp"

namespace scnet {

enum class Tier { macro, pico, femto };

const char* tier_name(Tier t);

struct BaseStation {
  int id = 0;
  Tier tier = Tier::macro;
  double x = 0.0, y = 0.0;       // meters
  double tx_power_dbm = 0.0;
  double bandwidth_hz = 0.0;     // BA budget N_j
  std::vector<int> kbs;          // sorted KB identifiers held by this BS
};

struct MobileUser {
  int id = 0;
  double x = 0.0, y = 0.0;       // meters
  std::vector<int> required_kbs; // sorted
  double min_bit_rate = 0.0;     // bit/s
};

struct GenConfig {
  int macro_count = 1;
  int pico_count = 5;
  int femto_count = 10;
  int mu_count = 200;
  double radius_m = 500.0;
  double macro_power_dbm = 43.0;
  double pico_power_dbm = 35.0;
  double femto_power_dbm = 20.0;
  double budget_hz = 2e6;
  double noise_dbm = -111.45;
  double min_bit_rate = 1e4;     // 0.01 Mbit/s
  int kb_pool = 10;
  int kb_per_bs = 6;
  int kb_per_mu = 3;
};

struct Topology {
  std::vector<BaseStation> bs;
  std::vector<MobileUser> mu;
  double noise_dbm = -111.45;

  int num_bs() const { return static_cast<int>(bs.size()); }
  int num_mu() const { return static_cast<int>(mu.size()); }
  Eigen::ArrayXd budgets() const;
};

/// Per-link physical-layer state, all matrices num_mu x num_bs.
struct ChannelState {
  Eigen::ArrayXXd sinr;         // linear ratio
  Eigen::ArrayXXd spec_eff;     // log2(1 + sinr), bit/s/Hz
  Eigen::ArrayXXd n_threshold;  // min_bit_rate / spec_eff, Hz
};

/// Macro/pico: 34 + 40 log10(d); femto: 37 + 30 log10(d). Distances are
/// clamped to 1 m before the log.
double path_loss_db(Tier tier, double distance_m);

/// Uniform drop in a disc with the first macro BS at the center.
/// Deterministic for a fixed (config, seed).
Topology generate_topology(const GenConfig& cfg, std::uint64_t seed);

/// Full-buffer co-channel SINR: every non-serving BS interferes at full
/// power; noise from the topology's configured level.
ChannelState compute_sinr(const Topology& topo);

/// One row per entity: kind,id,tier,x,y,power_dbm,budget_hz,min_bit_rate,kbs.
std::string topology_csv(const Topology& topo);

}  // namespace scnet
