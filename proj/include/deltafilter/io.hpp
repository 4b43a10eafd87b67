#pragma once

// File outputs: CSV with 17 significant digits for arrays, JSON for scalar summaries.
// Every file carries the resolved configuration.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deltafilter/config.hpp"
#include "deltafilter/filter.hpp"
#include "deltafilter/kernel.hpp"
#include "deltafilter/runner.hpp"

namespace deltafilter {

inline std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline nlohmann::json kernel_to_json(const DeltaKernel& kernel) {
  return {{"m", kernel.spec().m},
          {"k", kernel.spec().k},
          {"degree", kernel.degree()},
          {"coeffs", std::vector<double>(kernel.coeffs().begin(), kernel.coeffs().end())}};
}

inline DeltaKernel kernel_from_json(const nlohmann::json& j) {
  const KernelSpec spec{j.at("m").get<int>(), j.at("k").get<int>()};
  return build_kernel(spec);
}

/// Header {N, m, k, Nd, epsilon} followed by the row-major matrix.
inline nlohmann::json filter_to_json(const FilterMatrix& f, double nd) {
  const auto& s = f.matrix();
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) flat.push_back(s(i, j));
  }
  return {{"N", f.order()},  {"m", f.spec().m}, {"k", f.spec().k}, {"Nd", nd},
          {"epsilon", f.epsilon()}, {"rows", s.rows()}, {"cols", s.cols()}, {"S", flat}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline std::string config_comment(const CaseConfig& cfg) { return "# config: " + to_json(cfg).dump() + "\n"; }

inline std::string solution_csv(const RunResult& r) {
  std::ostringstream os;
  os << config_comment(r.config);
  if (!r.reference_note.empty()) os << "# reference: " << r.reference_note << "\n";
  const bool two_d = r.y.size() > 0;
  const bool have_ref = r.reference.size() > 0;
  os << (two_d ? "x,y" : "x");
  for (const auto& c : r.numerical_columns) os << "," << c;
  if (have_ref) {
    for (const auto& c : r.reference_columns) os << "," << c;
    os << ",error_" << r.numerical_columns.front();
  }
  os << "\n";
  for (Eigen::Index row = 0; row < r.numerical.rows(); ++row) {
    if (two_d) {
      const Eigen::Index ny = r.y.size();
      os << format_real(r.x(row / ny)) << "," << format_real(r.y(row % ny));
    } else {
      os << format_real(r.x(row));
    }
    for (Eigen::Index c = 0; c < r.numerical.cols(); ++c) os << "," << format_real(r.numerical(row, c));
    if (have_ref) {
      for (Eigen::Index c = 0; c < r.reference.cols(); ++c) os << "," << format_real(r.reference(row, c));
      os << "," << format_real(r.error->pointwise(row));
    }
    os << "\n";
  }
  return os.str();
}

inline nlohmann::json norms_json(const RunResult& r) {
  nlohmann::json j;
  j["config"] = to_json(r.config);
  j["epsilon"] = r.epsilon;
  if (r.y.size() > 0) j["epsilon_y"] = r.epsilon_y;
  j["steps"] = r.steps;
  j["final_time"] = r.final_time;
  j["filter_applications"] = r.filter_applications;
  j["cfl"] = r.cfl;
  j["conservation"] = {{"initial", r.integral_initial},
                       {"final", r.integral_final},
                       {"drift", r.integral_final - r.integral_initial}};
  if (r.error) {
    j["linf"] = r.error->linf;
    j["l2"] = r.error->l2;
    j["exclusion"] = {{"centers", r.error->discontinuities},
                      {"halfwidth", r.error->exclusion_halfwidth},
                      {"included_nodes", r.error->included_nodes}};
    nlohmann::json probes = nlohmann::json::array();
    for (const auto& p : r.error->probes) {
      probes.push_back({{"x", p.x}, {"numerical", p.numerical}, {"reference", p.reference}, {"error", p.error}});
    }
    j["probes"] = probes;
  } else {
    j["linf"] = nullptr;
    j["l2"] = nullptr;
    j["reference"] = r.reference_note;
  }
  return j;
}

struct ConvergenceRow {
  int n = 0;
  double epsilon = 0.0;
  double probe_error = 0.0;  ///< first probe if configured, else L-infinity
  double linf = 0.0;
};

inline std::string convergence_csv(const CaseConfig& cfg, const std::vector<ConvergenceRow>& rows, double rate) {
  std::ostringstream os;
  os << config_comment(cfg);
  os << "N,epsilon,probe_error,linf,local_rate,fitted_rate\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    std::string local = "";
    if (i > 0) {
      local = format_real(std::log(row.probe_error / rows[i - 1].probe_error) /
                          std::log(row.epsilon / rows[i - 1].epsilon));
    }
    os << row.n << "," << format_real(row.epsilon) << "," << format_real(row.probe_error) << ","
       << format_real(row.linf) << "," << local << "," << format_real(rate) << "\n";
  }
  return os.str();
}

inline std::string radial_csv(const CaseConfig& cfg, const RadialProfiles& p) {
  std::ostringstream os;
  os << config_comment(cfg);
  os << "r,rho_axis,rho_diagonal\n";
  for (std::size_t i = 0; i < p.radius.size(); ++i) {
    os << format_real(p.radius[i]) << "," << format_real(p.axis[i]) << "," << format_real(p.diagonal[i]) << "\n";
  }
  return os.str();
}

}  // namespace deltafilter
