#include "scnet/assignment.hpp"

#include <sstream>

namespace scnet {

std::vector<std::vector<int>> Assignment::members(int num_bs) const {
  std::vector<std::vector<int>> m(num_bs);
  for (size_t i = 0; i < serving.size(); ++i) {
    if (serving[i] >= 0) m[serving[i]].push_back(static_cast<int>(i));
  }
  return m;
}

Eigen::ArrayXXd Assignment::indicator(int num_bs) const {
  Eigen::ArrayXXd x =
      Eigen::ArrayXXd::Zero(static_cast<int>(serving.size()), num_bs);
  for (size_t i = 0; i < serving.size(); ++i) {
    if (serving[i] >= 0) x(static_cast<int>(i), serving[i]) = 1.0;
  }
  return x;
}

namespace {
void append_array(std::ostringstream& os, const char* key,
                  const std::vector<double>& v) {
  os << '"' << key << "\":[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ']';
}
}  // namespace

std::string report_json(const SolverReport& report) {
  std::ostringstream os;
  os.precision(12);
  os << "{\"objective\":" << report.objective << ",\"stm\":" << report.stm
     << ",\"iterations\":" << report.iterations << ',';
  append_array(os, "dual_trace", report.dual_trace);
  os << ',';
  append_array(os, "r_trace", report.r_trace);
  os << ',';
  append_array(os, "fbar_trace", report.fbar_trace);
  os << ",\"repairs\":[";
  for (size_t k = 0; k < report.repairs.size(); ++k) {
    if (k) os << ',';
    const auto& r = report.repairs[k];
    os << "{\"mu\":" << r.mu << ",\"from\":" << r.from_bs
       << ",\"to\":" << r.to_bs << '}';
  }
  os << "]}";
  return os.str();
}

}  // namespace scnet
