#include "scnet/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace scnet {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("config: unknown key \"" + it.key() +
                                  "\" in section \"" + section + "\"");
    }
  }
}

template <typename T>
void get(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  reject_unknown(root, "(top level)",
                 {"network", "semantics", "pkm", "ikm", "experiment"});
  ScenarioConfig cfg;

  if (root.contains("network")) {
    const json& n = root["network"];
    reject_unknown(n, "network",
                   {"macro", "pico", "femto", "mus", "radius_m", "powers_dbm",
                    "noise_dbm", "budget_hz", "min_bit_rate", "kb_policy"});
    get(n, "macro", cfg.network.macro_count);
    get(n, "pico", cfg.network.pico_count);
    get(n, "femto", cfg.network.femto_count);
    get(n, "mus", cfg.network.mu_count);
    get(n, "radius_m", cfg.network.radius_m);
    get(n, "noise_dbm", cfg.network.noise_dbm);
    get(n, "budget_hz", cfg.network.budget_hz);
    get(n, "min_bit_rate", cfg.network.min_bit_rate);
    if (n.contains("powers_dbm")) {
      const json& p = n["powers_dbm"];
      reject_unknown(p, "network.powers_dbm", {"macro", "pico", "femto"});
      get(p, "macro", cfg.network.macro_power_dbm);
      get(p, "pico", cfg.network.pico_power_dbm);
      get(p, "femto", cfg.network.femto_power_dbm);
    }
    if (n.contains("kb_policy")) {
      const json& p = n["kb_policy"];
      reject_unknown(p, "network.kb_policy", {"pool", "per_bs", "per_mu"});
      get(p, "pool", cfg.network.kb_pool);
      get(p, "per_bs", cfg.network.kb_per_bs);
      get(p, "per_mu", cfg.network.kb_per_mu);
    }
  }

  if (root.contains("semantics")) {
    const json& s = root["semantics"];
    reject_unknown(s, "semantics",
                   {"tau", "tau_csv", "tau0", "hs", "hs_csv", "slope"});
    if (s.contains("tau")) {
      if (s["tau"].is_string()) {
        if (s["tau"].get<std::string>() != "kb") {
          throw std::invalid_argument(
              "config: semantics.tau must be a number or \"kb\"");
        }
        cfg.semantics.tau_mode = SemanticsConfig::TauMode::kb;
      } else {
        cfg.semantics.tau_mode = SemanticsConfig::TauMode::uniform;
        cfg.semantics.tau_value = s["tau"].get<double>();
      }
    }
    if (s.contains("tau_csv")) {
      cfg.semantics.tau_mode = SemanticsConfig::TauMode::csv;
      cfg.semantics.tau_csv = s["tau_csv"].get<std::string>();
    }
    get(s, "tau0", cfg.semantics.tau0);
    get(s, "hs", cfg.semantics.intercept);
    get(s, "hs_csv", cfg.semantics.hs_csv);
    if (s.contains("slope")) {
      if (s["slope"].is_string()) {
        if (s["slope"].get<std::string>() != "sinr") {
          throw std::invalid_argument(
              "config: semantics.slope must be a number or \"sinr\"");
        }
        cfg.semantics.slope_mode = SemanticsConfig::SlopeMode::sinr;
      } else {
        cfg.semantics.slope_mode = SemanticsConfig::SlopeMode::constant;
        cfg.semantics.slope_value = s["slope"].get<double>();
      }
    }
  }

  if (root.contains("pkm")) {
    const json& p = root["pkm"];
    reject_unknown(p, "pkm",
                   {"stepsize_coeff", "max_iters", "stability_window"});
    get(p, "stepsize_coeff", cfg.pkm.stepsize_coeff);
    get(p, "max_iters", cfg.pkm.max_iters);
    get(p, "stability_window", cfg.pkm.stability_window);
  }

  if (root.contains("ikm")) {
    const json& k = root["ikm"];
    reject_unknown(k, "ikm",
                   {"alpha", "r_init", "r_decay", "r_min", "inner_tol_rel",
                    "inner_max_iters", "ba_max_sweeps"});
    get(k, "alpha", cfg.ikm.alpha);
    get(k, "r_init", cfg.ikm.r_init);
    get(k, "r_decay", cfg.ikm.r_decay);
    get(k, "r_min", cfg.ikm.r_min);
    get(k, "inner_tol_rel", cfg.ikm.inner_tol_rel);
    get(k, "inner_max_iters", cfg.ikm.inner_max_iters);
    get(k, "ba_max_sweeps", cfg.ikm.ba_max_sweeps);
  }

  if (root.contains("experiment")) {
    const json& e = root["experiment"];
    reject_unknown(e, "experiment", {"trials", "seed"});
    get(e, "trials", cfg.experiment.trials);
    get(e, "seed", cfg.experiment.seed);
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Instance build_instance(const ScenarioConfig& cfg, std::uint64_t seed) {
  Instance inst;
  inst.topo = generate_topology(cfg.network, seed);
  inst.channel = compute_sinr(inst.topo);
  inst.budgets = inst.topo.budgets();

  const int U = inst.topo.num_mu();
  const int B = inst.topo.num_bs();
  switch (cfg.semantics.slope_mode) {
    case SemanticsConfig::SlopeMode::constant:
      inst.b2m = B2MProfile::uniform(U, B, cfg.semantics.slope_value,
                                     cfg.semantics.intercept);
      break;
    case SemanticsConfig::SlopeMode::sinr:
      inst.b2m = B2MProfile::sinr_scaled(inst.channel, cfg.semantics.intercept);
      break;
  }
  if (!cfg.semantics.hs_csv.empty()) {
    inst.b2m.intercept = load_matrix_csv(cfg.semantics.hs_csv);
    if (inst.b2m.intercept.rows() != U || inst.b2m.intercept.cols() != B) {
      throw std::invalid_argument("config: hs_csv dimensions mismatch");
    }
  }

  switch (cfg.semantics.tau_mode) {
    case SemanticsConfig::TauMode::uniform:
      inst.matching = make_matching(
          Eigen::ArrayXXd::Constant(U, B, cfg.semantics.tau_value),
          cfg.semantics.tau0);
      break;
    case SemanticsConfig::TauMode::kb:
      inst.matching = make_matching_from_kbs(inst.topo, cfg.semantics.tau0);
      break;
    case SemanticsConfig::TauMode::csv: {
      const Eigen::ArrayXXd tau = load_matrix_csv(cfg.semantics.tau_csv);
      if (tau.rows() != U || tau.cols() != B) {
        throw std::invalid_argument("config: tau_csv dimensions mismatch");
      }
      inst.matching = make_matching(tau, cfg.semantics.tau0);
      break;
    }
  }
  return inst;
}

Eigen::ArrayXXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument(path + ": ragged rows");
    }
    rows.push_back(std::move(row));
  }
  Eigen::ArrayXXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return m;
}

void save_matrix_csv(const std::string& path, const Eigen::ArrayXXd& m) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path);
  out.precision(12);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_svg_lines(const std::string& path,
                     const std::vector<std::string>& series_names,
                     const std::vector<std::vector<double>>& xs,
                     const std::vector<std::vector<double>>& ys,
                     const std::string& x_label, const std::string& y_label) {
  const int w = 640, h = 420, ml = 70, mr = 20, mt = 20, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (size_t s = 0; s < xs.size(); ++s) {
    for (double v : xs[s]) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : ys[s]) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr);
  };
  auto py = [&](double y) {
    return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label
      << "</text>\n"
      << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";
  for (size_t s = 0; s < xs.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[s % 6]
        << "\" stroke-width=\"2\" points=\"";
    for (size_t k = 0; k < xs[s].size(); ++k) {
      out << px(xs[s][k]) << ',' << py(ys[s][k]) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << w - mr - 150 << "\" y=\"" << mt + 18 * (s + 1)
        << "\" font-size=\"12\" fill=\"" << colors[s % 6] << "\">"
        << series_names[s] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace scnet
