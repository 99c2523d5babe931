#include "scnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scnet {

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::macro: return "macro";
    case Tier::pico: return "pico";
    case Tier::femto: return "femto";
  }
  return "?";
}

Eigen::ArrayXd Topology::budgets() const {
  Eigen::ArrayXd n(num_bs());
  for (int j = 0; j < num_bs(); ++j) n[j] = bs[j].bandwidth_hz;
  return n;
}

double path_loss_db(Tier tier, double distance_m) {
  const double d = std::max(distance_m, 1.0);
  if (!(d > 0.0)) throw std::domain_error("path_loss_db: bad distance");
  if (tier == Tier::femto) return 37.0 + 30.0 * std::log10(d);
  return 34.0 + 40.0 * std::log10(d);
}

namespace {

std::vector<int> sample_subset(int pool, int k, Rng& rng) {
  std::vector<int> ids(pool);
  for (int i = 0; i < pool; ++i) ids[i] = i;
  // partial Fisher-Yates
  k = std::min(k, pool);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.integer(pool - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void drop_uniform(double radius, Rng& rng, double* x, double* y) {
  const double r = radius * std::sqrt(rng.uniform());
  const double th = 2.0 * M_PI * rng.uniform();
  *x = r * std::cos(th);
  *y = r * std::sin(th);
}

}  // namespace

Topology generate_topology(const GenConfig& cfg, std::uint64_t seed) {
  if (cfg.macro_count + cfg.pico_count + cfg.femto_count <= 0 ||
      cfg.mu_count <= 0) {
    throw std::invalid_argument("generate_topology: need >= 1 BS and >= 1 MU");
  }
  if (cfg.macro_count < 0 || cfg.pico_count < 0 || cfg.femto_count < 0 ||
      cfg.radius_m <= 0.0 || cfg.budget_hz <= 0.0 || cfg.min_bit_rate <= 0.0) {
    throw std::invalid_argument("generate_topology: bad configuration");
  }
  if (cfg.kb_pool <= 0 || cfg.kb_per_bs < 0 || cfg.kb_per_mu < 0 ||
      cfg.kb_per_bs > cfg.kb_pool || cfg.kb_per_mu > cfg.kb_pool) {
    throw std::invalid_argument("generate_topology: bad KB policy");
  }
  Rng rng(seed);
  Topology topo;
  topo.noise_dbm = cfg.noise_dbm;

  auto add_bs = [&](Tier tier, double power, bool center) {
    BaseStation b;
    b.id = topo.num_bs();
    b.tier = tier;
    b.tx_power_dbm = power;
    b.bandwidth_hz = cfg.budget_hz;
    if (!center) drop_uniform(cfg.radius_m, rng, &b.x, &b.y);
    b.kbs = sample_subset(cfg.kb_pool, cfg.kb_per_bs, rng);
    topo.bs.push_back(std::move(b));
  };
  for (int i = 0; i < cfg.macro_count; ++i) {
    add_bs(Tier::macro, cfg.macro_power_dbm, i == 0);
  }
  for (int i = 0; i < cfg.pico_count; ++i) {
    add_bs(Tier::pico, cfg.pico_power_dbm, false);
  }
  for (int i = 0; i < cfg.femto_count; ++i) {
    add_bs(Tier::femto, cfg.femto_power_dbm, false);
  }

  for (int i = 0; i < cfg.mu_count; ++i) {
    MobileUser u;
    u.id = i;
    drop_uniform(cfg.radius_m, rng, &u.x, &u.y);
    u.required_kbs = sample_subset(cfg.kb_pool, cfg.kb_per_mu, rng);
    u.min_bit_rate = cfg.min_bit_rate;
    topo.mu.push_back(std::move(u));
  }
  return topo;
}

ChannelState compute_sinr(const Topology& topo) {
  const int U = topo.num_mu();
  const int B = topo.num_bs();
  ChannelState ch;
  ch.sinr.resize(U, B);
  ch.spec_eff.resize(U, B);
  ch.n_threshold.resize(U, B);

  const double noise_mw = std::pow(10.0, topo.noise_dbm / 10.0);
  Eigen::ArrayXXd rx_mw(U, B);
  for (int i = 0; i < U; ++i) {
    for (int j = 0; j < B; ++j) {
      const auto& b = topo.bs[j];
      const double d = std::hypot(topo.mu[i].x - b.x, topo.mu[i].y - b.y);
      const double pl = path_loss_db(b.tier, d);
      rx_mw(i, j) = std::pow(10.0, (b.tx_power_dbm - pl) / 10.0);
    }
  }
  for (int i = 0; i < U; ++i) {
    const double row_sum = rx_mw.row(i).sum();
    for (int j = 0; j < B; ++j) {
      const double interference = row_sum - rx_mw(i, j);
      ch.sinr(i, j) = rx_mw(i, j) / (interference + noise_mw);
      ch.spec_eff(i, j) = std::log2(1.0 + ch.sinr(i, j));
      ch.n_threshold(i, j) = topo.mu[i].min_bit_rate / ch.spec_eff(i, j);
    }
  }
  return ch;
}

std::string topology_csv(const Topology& topo) {
  std::ostringstream os;
  os << "kind,id,tier,x,y,power_dbm,budget_hz,min_bit_rate,kbs\n";
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += '|';
      s += std::to_string(v[i]);
    }
    return s;
  };
  for (const auto& b : topo.bs) {
    os << "bs," << b.id << ',' << tier_name(b.tier) << ',' << b.x << ',' << b.y
       << ',' << b.tx_power_dbm << ',' << b.bandwidth_hz << ",," << join(b.kbs)
       << '\n';
  }
  for (const auto& u : topo.mu) {
    os << "mu," << u.id << ",," << u.x << ',' << u.y << ",,,"
       << u.min_bit_rate << ',' << join(u.required_kbs) << '\n';
  }
  return os.str();
}

}  // namespace scnet
