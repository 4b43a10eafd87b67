#pragma once

// Benchmark case configuration: defaults per case, validation and JSON round-trip.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deltafilter/errors.hpp"
#include "deltafilter/filter.hpp"
#include "deltafilter/kernel.hpp"

namespace deltafilter {

enum class Case { advection, burgers, sod, shu_osher, explosion };

inline std::string_view to_string(Case c) {
  switch (c) {
    case Case::advection: return "advection";
    case Case::burgers: return "burgers";
    case Case::sod: return "sod";
    case Case::shu_osher: return "shu_osher";
    case Case::explosion: return "explosion";
  }
  return "?";
}

inline Case parse_case(std::string_view name) {
  for (Case c : {Case::advection, Case::burgers, Case::sod, Case::shu_osher, Case::explosion}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("case", "unknown case '" + std::string(name) +
                                "' (expected advection, burgers, sod, shu_osher or explosion)");
}

/// How eps is derived from the grid: `grid` is sin(pi Nd / 2N); `theoretical` is N^{-k/(m+k+2)}.
enum class EpsilonRule { grid, theoretical };

struct CaseConfig {
  Case problem = Case::advection;
  int n = 128;
  int nx = 128;
  int ny = 128;
  KernelSpec kernel{3, 8};
  double nd = 13.0;
  double dt = 1e-4;
  double t_final = 1.0;
  std::string output_dir = "out";
  std::vector<int> grids;
  double gamma = 1.4;
  std::vector<double> probes;
  std::optional<double> exclusion;  ///< half-width of the norm exclusion zone; case default if unset
  EpsilonRule epsilon_rule = EpsilonRule::grid;
  double interface = 0.0;  ///< initial discontinuity location for sod / shu_osher

  bool is_2d() const noexcept { return problem == Case::explosion; }

  long steps() const { return std::llround(t_final / dt); }

  double epsilon_for(int order) const {
    return epsilon_rule == EpsilonRule::grid ? scaling_parameter(order, nd)
                                             : theoretical_scaling_parameter(order, kernel);
  }

  /// Copy for another polynomial order (sweeps); 2D cases use it for both directions.
  CaseConfig with_order(int order) const {
    CaseConfig c = *this;
    c.n = c.nx = c.ny = order;
    c.grids.clear();
    return c;
  }
};

struct CaseDefaults {
  KernelSpec kernel;
  double nd;
  double dt;
  double t_final;
  double interface;
  std::vector<double> probes;
};

inline CaseDefaults defaults_for(Case c) {
  switch (c) {
    case Case::advection: return {{3, 8}, 13.0, 1e-4, 1.0, 0.0, {0.28}};
    case Case::burgers: return {{3, 8}, 2.5, 1e-5, 1.0, 0.0, {}};
    case Case::sod: return {{3, 8}, 2.5, 1e-5, 0.4, 0.0, {}};
    case Case::shu_osher: return {{5, 8}, 6.5, 1e-5, 0.36, -0.8, {}};
    case Case::explosion: return {{3, 8}, 2.5, 1e-5, 0.25, 0.0, {}};
  }
  throw ConfigError("case", "unhandled case");
}

namespace detail {

inline void check_order(const std::string& field, int n, double nd) {
  if (n < 4 || n % 2 != 0) throw ConfigError(field, "must be an even integer >= 4, got " + std::to_string(n));
  if (!(nd < n)) throw ConfigError("Nd", "must be smaller than " + field + " (" + std::to_string(n) + ")");
}

template <class T>
T get_as(const nlohmann::json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(key, std::string("invalid value: ") + e.what());
  }
}

}  // namespace detail

inline void validate(const CaseConfig& c) {
  c.kernel.validate();
  if (!(c.nd > 0.0)) throw ConfigError("Nd", "must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(c.t_final > 0.0)) throw ConfigError("tfinal", "must be positive");
  if (!(c.gamma > 1.0)) throw ConfigError("gamma", "must exceed 1");
  if (c.exclusion && !(*c.exclusion >= 0.0)) throw ConfigError("exclusion", "must be non-negative");
  if (std::abs(static_cast<double>(c.steps()) * c.dt - c.t_final) > 1e-9 * c.t_final || c.steps() < 1) {
    throw ConfigError("dt", "tfinal must be an integer multiple of dt");
  }
  if (c.is_2d()) {
    detail::check_order("Nx", c.nx, c.nd);
    detail::check_order("Ny", c.ny, c.nd);
  } else {
    detail::check_order("N", c.n, c.nd);
  }
  for (int g : c.grids) detail::check_order("grids", g, c.nd);
  for (double p : c.probes) {
    if (!(std::abs(p) <= 1.0)) throw ConfigError("probes", "probe locations must lie in [-1, 1]");
  }
  if (c.epsilon_rule == EpsilonRule::theoretical) {
    for (int n : {c.n, c.nx, c.ny}) {
      const double e = c.epsilon_for(n);
      if (!(e > 0.0 && e < 1.0)) throw ConfigError("epsilon_rule", "theoretical eps outside (0, 1)");
    }
  }
}

/// Builds a validated configuration: case defaults, then `file` values, then `flags`.
/// Both objects use the flag names: case, N, Nx, Ny, m, k, Nd, dt, tfinal, grids, out,
/// plus gamma, probes, exclusion, epsilon_rule, interface.
inline CaseConfig resolve_config(const nlohmann::json& file, const nlohmann::json& flags) {
  static const std::vector<std::string> known = {"case", "N",     "Nx",     "Ny",        "m",
                                                 "k",    "Nd",    "dt",     "tfinal",    "grids",
                                                 "out",  "gamma", "probes", "exclusion", "epsilon_rule",
                                                 "interface"};
  nlohmann::json merged = nlohmann::json::object();
  for (const auto* src : {&file, &flags}) {
    if (src->is_null()) continue;
    if (!src->is_object()) throw ConfigError("config", "configuration must be a JSON object");
    for (auto it = src->begin(); it != src->end(); ++it) {
      if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
        throw ConfigError(it.key(), "unknown configuration field");
      }
      merged[it.key()] = it.value();
    }
  }
  if (!merged.contains("case")) throw ConfigError("case", "a case must be given");

  CaseConfig c;
  c.problem = parse_case(detail::get_as<std::string>(merged, "case"));
  const CaseDefaults d = defaults_for(c.problem);
  c.kernel = d.kernel;
  c.nd = d.nd;
  c.dt = d.dt;
  c.t_final = d.t_final;
  c.interface = d.interface;
  c.probes = d.probes;

  if (merged.contains("N")) c.n = detail::get_as<int>(merged, "N");
  c.nx = merged.contains("Nx") ? detail::get_as<int>(merged, "Nx") : c.n;
  c.ny = merged.contains("Ny") ? detail::get_as<int>(merged, "Ny") : c.n;
  if (merged.contains("m")) c.kernel.m = detail::get_as<int>(merged, "m");
  if (merged.contains("k")) c.kernel.k = detail::get_as<int>(merged, "k");
  if (merged.contains("Nd")) c.nd = detail::get_as<double>(merged, "Nd");
  if (merged.contains("dt")) c.dt = detail::get_as<double>(merged, "dt");
  if (merged.contains("tfinal")) c.t_final = detail::get_as<double>(merged, "tfinal");
  if (merged.contains("grids")) c.grids = detail::get_as<std::vector<int>>(merged, "grids");
  if (merged.contains("out")) c.output_dir = detail::get_as<std::string>(merged, "out");
  if (merged.contains("gamma")) c.gamma = detail::get_as<double>(merged, "gamma");
  if (merged.contains("probes")) c.probes = detail::get_as<std::vector<double>>(merged, "probes");
  if (merged.contains("exclusion") && !merged["exclusion"].is_null()) {
    c.exclusion = detail::get_as<double>(merged, "exclusion");
  }
  if (merged.contains("interface")) c.interface = detail::get_as<double>(merged, "interface");
  if (merged.contains("epsilon_rule")) {
    const auto rule = detail::get_as<std::string>(merged, "epsilon_rule");
    if (rule == "grid") c.epsilon_rule = EpsilonRule::grid;
    else if (rule == "theoretical") c.epsilon_rule = EpsilonRule::theoretical;
    else throw ConfigError("epsilon_rule", "expected 'grid' or 'theoretical'");
  }
  validate(c);
  return c;
}

inline nlohmann::json to_json(const CaseConfig& c) {
  nlohmann::json j;
  j["case"] = std::string(to_string(c.problem));
  if (c.is_2d()) {
    j["Nx"] = c.nx;
    j["Ny"] = c.ny;
  } else {
    j["N"] = c.n;
  }
  j["m"] = c.kernel.m;
  j["k"] = c.kernel.k;
  j["Nd"] = c.nd;
  j["dt"] = c.dt;
  j["tfinal"] = c.t_final;
  j["grids"] = c.grids;
  j["out"] = c.output_dir;
  j["gamma"] = c.gamma;
  j["probes"] = c.probes;
  j["exclusion"] = c.exclusion ? nlohmann::json(*c.exclusion) : nlohmann::json(nullptr);
  j["epsilon_rule"] = c.epsilon_rule == EpsilonRule::grid ? "grid" : "theoretical";
  j["interface"] = c.interface;
  return j;
}

}  // namespace deltafilter
