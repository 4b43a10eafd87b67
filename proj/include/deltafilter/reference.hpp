#pragma once

// Exact and reference solutions for the benchmark problems, plus error norms.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <math.h>  // pchip.hpp calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>

#include "deltafilter/errors.hpp"
#include "deltafilter/gas.hpp"
#include "deltafilter/spectral.hpp"

namespace deltafilter {

// ---------------------------------------------------------------------------
// Linear advection u_t + u_x = 0 on [-1, 1], unit speed, jump of +1 at x = -0.25.

inline double advection_initial(double x) {
  const double base = std::sin(std::numbers::pi * x);
  return x <= -0.25 ? base - 0.5 : base + 0.5;
}

/// Inflow value at x = -1.
inline double advection_inflow(double t) { return std::sin(std::numbers::pi * (-1.0 - t)) - 0.5; }

/// Exact solution. The inflow-fed region x - t < -1 carries sin(pi(x - t)) - 0.5, which is the
/// left branch of the initial profile evaluated at x - t, so one formula covers both.
inline double exact_advection(double x, double t) { return advection_initial(x - t); }

inline double advection_jump_location(double t) { return -0.25 + t; }

// ---------------------------------------------------------------------------
// Burgers u_t + (u^2/2)_x = 0, u(x,0) = -sin(pi x), u(+-1,t) = 0.

inline double burgers_initial(double x) { return -std::sin(std::numbers::pi * x); }

/// Time after which the stationary shock at x = 0 exists.
inline double burgers_shock_time() { return 1.0 / std::numbers::pi; }

/// Exact solution by characteristics: u = -sin(pi xi) with foot xi solving xi - t sin(pi xi) = x.
/// For x > 0 the foot lies on the branch where the map is increasing, which selects the
/// post-shock state; x < 0 follows by odd symmetry. Throws OracleError on non-convergence.
inline double exact_burgers(double x, double t) {
  if (t < 0.0) throw std::invalid_argument("exact_burgers: t must be >= 0");
  if (t == 0.0) return burgers_initial(x);
  if (x == 0.0) return 0.0;
  if (x < 0.0) return -exact_burgers(-x, t);

  const double pi = std::numbers::pi;
  auto g = [&](double xi) { return xi - t * std::sin(pi * xi) - x; };
  auto dg = [&](double xi) { return 1.0 - pi * t * std::cos(pi * xi); };

  double lo = (pi * t > 1.0) ? std::acos(1.0 / (pi * t)) / pi : 0.0;
  double hi = 1.0;
  if (x >= 1.0) return 0.0;
  if (g(lo) > 0.0 || g(hi) < 0.0) throw OracleError("exact_burgers: root not bracketed");

  double xi = 0.5 * (lo + hi);
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const double gx = g(xi);
    if (gx == 0.0) {
      converged = true;
      break;
    }
    if (gx < 0.0) lo = xi; else hi = xi;
    double next = xi - gx / dg(xi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - xi) <= 1e-15 * std::max(1.0, std::abs(xi)) || hi - lo <= 1e-15) {
      xi = next;
      converged = true;
      break;
    }
    xi = next;
  }
  if (!converged) throw OracleError("exact_burgers: Newton iteration did not converge");
  const double u = -std::sin(pi * xi);
  const double residual = u + std::sin(pi * (x - u * t));
  if (!(std::abs(residual) < 1e-12)) {
    throw OracleError("exact_burgers: characteristic residual " + std::to_string(residual));
  }
  return u;
}

// ---------------------------------------------------------------------------
// Exact Riemann solver for the 1D gamma-law Euler equations (no vacuum).

struct RiemannSolution {
  Primitive1D left;
  Primitive1D right;
  GasModel gas;

  double p_star = 0.0;
  double u_star = 0.0;
  double rho_star_left = 0.0;
  double rho_star_right = 0.0;
  bool left_shock = false;
  bool right_shock = false;

  // Characteristic speeds. For a shock head == tail == shock speed.
  double left_head = 0.0;
  double left_tail = 0.0;
  double contact = 0.0;
  double right_tail = 0.0;
  double right_head = 0.0;

  /// Similarity solution at xi = x / t.
  Primitive1D sample(double xi) const {
    const double g = gas.gamma;
    const double g3 = 2.0 * g / (g - 1.0);
    const double g4 = 2.0 / (g - 1.0);
    const double g5 = 2.0 / (g + 1.0);
    const double g7 = (g - 1.0) / 2.0;
    if (xi <= contact) {
      if (xi <= left_head) return left;
      if (xi >= left_tail) return {rho_star_left, u_star, p_star};
      const double cl = gas.sound_speed(left.rho, left.p);
      const double c = g5 * (cl + g7 * (left.u - xi));
      return {left.rho * std::pow(c / cl, g4), g5 * (cl + g7 * left.u + xi), left.p * std::pow(c / cl, g3)};
    }
    if (xi >= right_head) return right;
    if (xi <= right_tail) return {rho_star_right, u_star, p_star};
    const double cr = gas.sound_speed(right.rho, right.p);
    const double c = g5 * (cr - g7 * (right.u - xi));
    return {right.rho * std::pow(c / cr, g4), g5 * (-cr + g7 * right.u + xi), right.p * std::pow(c / cr, g3)};
  }

  Primitive1D sample(double x, double t, double x0 = 0.0) const {
    if (t <= 0.0) return x < x0 ? left : right;
    return sample((x - x0) / t);
  }

  /// Speeds of the discontinuities (shocks and the contact) in the solution.
  std::vector<double> discontinuity_speeds() const {
    std::vector<double> s;
    if (left_shock) s.push_back(left_head);
    s.push_back(contact);
    if (right_shock) s.push_back(right_head);
    return s;
  }
};

namespace detail {

struct PressureBranch {
  double value;
  double slope;
};

inline PressureBranch pressure_branch(double p, const Primitive1D& w, const GasModel& gas) {
  const double g = gas.gamma;
  const double c = gas.sound_speed(w.rho, w.p);
  if (p > w.p) {
    const double a = 2.0 / ((g + 1.0) * w.rho);
    const double b = (g - 1.0) / (g + 1.0) * w.p;
    const double q = std::sqrt(a / (b + p));
    return {(p - w.p) * q, q * (1.0 - 0.5 * (p - w.p) / (b + p))};
  }
  const double ratio = p / w.p;
  return {2.0 * c / (g - 1.0) * (std::pow(ratio, (g - 1.0) / (2.0 * g)) - 1.0),
          1.0 / (w.rho * c) * std::pow(ratio, -(g + 1.0) / (2.0 * g))};
}

}  // namespace detail

/// Residual f_L(p) + f_R(p) + (u_R - u_L) of the star-pressure equation.
inline double riemann_pressure_residual(const RiemannSolution& s, double p) {
  return detail::pressure_branch(p, s.left, s.gas).value + detail::pressure_branch(p, s.right, s.gas).value +
         (s.right.u - s.left.u);
}

inline RiemannSolution solve_riemann(const Primitive1D& left, const Primitive1D& right, const GasModel& gas) {
  gas.validate();
  if (!(left.rho > 0 && left.p > 0 && right.rho > 0 && right.p > 0)) {
    throw std::invalid_argument("solve_riemann: states must have positive density and pressure");
  }
  const double g = gas.gamma;
  const double cl = gas.sound_speed(left.rho, left.p);
  const double cr = gas.sound_speed(right.rho, right.p);
  if (2.0 / (g - 1.0) * (cl + cr) <= right.u - left.u) throw OracleError("solve_riemann: data generate vacuum");

  RiemannSolution s;
  s.left = left;
  s.right = right;
  s.gas = gas;

  // Primitive-variable guess, then Newton on the pressure function.
  double p = 0.5 * (left.p + right.p) - 0.125 * (right.u - left.u) * (left.rho + right.rho) * (cl + cr);
  p = std::max(p, 1e-8);
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const auto fl = detail::pressure_branch(p, left, gas);
    const auto fr = detail::pressure_branch(p, right, gas);
    double next = p - (fl.value + fr.value + right.u - left.u) / (fl.slope + fr.slope);
    if (next <= 0.0) next = 0.5 * p;
    const double change = 2.0 * std::abs(next - p) / (next + p);
    p = next;
    if (change < 1e-15) {
      converged = true;
      break;
    }
  }
  if (!converged || !(std::abs(riemann_pressure_residual(s, p)) < 1e-10)) {
    throw OracleError("solve_riemann: star-pressure iteration did not converge");
  }
  s.p_star = p;
  const auto fl = detail::pressure_branch(p, left, gas);
  const auto fr = detail::pressure_branch(p, right, gas);
  s.u_star = 0.5 * (left.u + right.u) + 0.5 * (fr.value - fl.value);
  s.contact = s.u_star;

  const double g6 = (g - 1.0) / (g + 1.0);
  const double g1 = (g - 1.0) / (2.0 * g);
  const double g2 = (g + 1.0) / (2.0 * g);
  s.left_shock = p > left.p;
  if (s.left_shock) {
    const double r = p / left.p;
    s.rho_star_left = left.rho * (r + g6) / (g6 * r + 1.0);
    s.left_head = s.left_tail = left.u - cl * std::sqrt(g2 * r + g1);
  } else {
    s.rho_star_left = left.rho * std::pow(p / left.p, 1.0 / g);
    s.left_head = left.u - cl;
    s.left_tail = s.u_star - cl * std::pow(p / left.p, g1);
  }
  s.right_shock = p > right.p;
  if (s.right_shock) {
    const double r = p / right.p;
    s.rho_star_right = right.rho * (r + g6) / (g6 * r + 1.0);
    s.right_head = s.right_tail = right.u + cr * std::sqrt(g2 * r + g1);
  } else {
    s.rho_star_right = right.rho * std::pow(p / right.p, 1.0 / g);
    s.right_head = right.u + cr;
    s.right_tail = s.u_star + cr * std::pow(p / right.p, g1);
  }
  return s;
}

inline Primitive1D sod_left() { return {1.0, 0.0, 1.0}; }
inline Primitive1D sod_right() { return {0.125, 0.0, 0.1}; }

/// Sod data with the left state on x < 0 and the right state on x >= 0.
inline Primitive1D exact_sod(double x, double t, const GasModel& gas = {}) {
  if (!(t > 0.0)) throw std::invalid_argument("exact_sod: t must be positive");
  return solve_riemann(sod_left(), sod_right(), gas).sample(x / t);
}

// ---------------------------------------------------------------------------
// Shu-Osher: Mach 3 shock into a sinusoidal density field, on [-1, 1].

struct ShuOsherSetup {
  double interface = -0.8;
  double wavenumber = 25.0;
  double amplitude = 0.2;
};

inline Primitive1D shu_osher_left() {
  return {27.0 / 7.0, 4.0 * std::sqrt(35.0) / 9.0, 31.0 / 3.0};
}

inline Primitive1D shu_osher_initial(double x, const ShuOsherSetup& setup = {}) {
  if (x < setup.interface) return shu_osher_left();
  return {1.0 + setup.amplitude * std::sin(setup.wavenumber * x), 0.0, 1.0};
}

inline constexpr const char* kReferenceDirEnv = "DELTAFILTER_REF_DIR";

/// Directory holding reference data: $DELTAFILTER_REF_DIR, else the build-time default.
inline std::filesystem::path reference_directory() {
  if (const char* env = std::getenv(kReferenceDirEnv); env != nullptr && *env != '\0') return env;
#ifdef DELTAFILTER_DEFAULT_REF_DIR
  return DELTAFILTER_DEFAULT_REF_DIR;
#else
  return "data/reference";
#endif
}

/// High-resolution density profiles read from `shu_osher_t<t>.csv` files, interpolated with
/// monotone piecewise cubics.
class ShuOsherReference {
public:
  struct Profile {
    double time = 0.0;
    std::vector<double> x;
    std::vector<double> rho;
  };

  /// Loads every `shu_osher_t*.csv` in `dir`. Throws ReferenceUnavailable if none is usable.
  static ShuOsherReference load(const std::filesystem::path& dir, ShuOsherSetup setup = {}) {
    ShuOsherReference ref;
    ref.setup_ = setup;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
      throw ReferenceUnavailable("Shu-Osher reference directory not found: " + dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (name.rfind("shu_osher_t", 0) != 0 || entry.path().extension() != ".csv") continue;
      ref.add(read_profile(entry.path()));
    }
    if (ref.profiles_.empty()) throw ReferenceUnavailable("no Shu-Osher reference files in " + dir.string());
    return ref;
  }

  static ShuOsherReference load_default(ShuOsherSetup setup = {}) { return load(reference_directory(), setup); }

  static Profile read_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ReferenceUnavailable("cannot open " + path.string());
    Profile p;
    long declared = -1;
    bool have_header = false;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        if (!have_header && line.find("case=shu_osher") != std::string::npos) {
          std::istringstream hs(line.substr(1));
          std::string tok;
          while (hs >> tok) {
            if (tok.rfind("t=", 0) == 0) p.time = std::stod(tok.substr(2));
            if (tok.rfind("n=", 0) == 0) declared = std::stol(tok.substr(2));
          }
          have_header = true;
        }
        continue;
      }
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ReferenceUnavailable("malformed row in " + path.string());
      try {
        p.x.push_back(std::stod(line.substr(0, comma)));
        p.rho.push_back(std::stod(line.substr(comma + 1)));
      } catch (const std::exception&) {
        throw ReferenceUnavailable("malformed row '" + line + "' in " + path.string());
      }
    }
    if (!have_header) throw ReferenceUnavailable("missing '# case=shu_osher' header in " + path.string());
    if (declared >= 0 && static_cast<std::size_t>(declared) != p.x.size()) {
      throw ReferenceUnavailable("row count does not match header in " + path.string());
    }
    if (p.x.size() < 4 || !std::is_sorted(p.x.begin(), p.x.end())) {
      throw ReferenceUnavailable("reference rows must be at least 4 and ascending in x: " + path.string());
    }
    return p;
  }

  bool has_time(double t) const { return find(t) != nullptr; }

  std::vector<double> times() const {
    std::vector<double> t;
    for (const auto& e : profiles_) t.push_back(e.profile.time);
    return t;
  }

  const Profile& profile(double t) const {
    const Entry* e = find(t);
    if (e == nullptr) throw ReferenceUnavailable("no Shu-Osher reference at t=" + std::to_string(t));
    return e->profile;
  }

  /// Density at (x, t); t = 0 is the analytic initial condition.
  double density(double x, double t) const {
    if (t == 0.0) return shu_osher_initial(x, setup_).rho;
    const Entry* e = find(t);
    if (e == nullptr) throw ReferenceUnavailable("no Shu-Osher reference at t=" + std::to_string(t));
    const auto& xs = e->profile.x;
    if (x <= xs.front()) return e->profile.rho.front();
    if (x >= xs.back()) return e->profile.rho.back();
    return (*e->interp)(x);
  }

  /// Location of the steepest density drop, taken as the shock position.
  double shock_location(double t) const {
    const auto& p = profile(t);
    std::size_t best = 0;
    double drop = 0.0;
    for (std::size_t i = 0; i + 1 < p.x.size(); ++i) {
      if (p.rho[i] - p.rho[i + 1] > drop) {
        drop = p.rho[i] - p.rho[i + 1];
        best = i;
      }
    }
    return 0.5 * (p.x[best] + p.x[best + 1]);
  }

private:
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  struct Entry {
    Profile profile;
    std::shared_ptr<Pchip> interp;
  };

  void add(Profile p) {
    auto xs = p.x;
    auto ys = p.rho;
    Entry e{std::move(p), std::make_shared<Pchip>(std::move(xs), std::move(ys))};
    profiles_.push_back(std::move(e));
  }

  const Entry* find(double t) const {
    for (const auto& e : profiles_) {
      if (std::abs(e.profile.time - t) <= 1e-9) return &e;
    }
    return nullptr;
  }

  ShuOsherSetup setup_;
  std::vector<Entry> profiles_;
};

// ---------------------------------------------------------------------------
// 2D explosion: circle of radius 0.4 at the origin; r == R counts as outside.

inline constexpr double kExplosionRadius = 0.4;

inline Primitive2D explosion_inside() { return {1.0, 0.0, 0.0, 1.0}; }
inline Primitive2D explosion_outside() { return {0.125, 0.0, 0.0, 0.1}; }

inline Primitive2D explosion_initial(double x, double y) {
  return (x * x + y * y < kExplosionRadius * kExplosionRadius) ? explosion_inside() : explosion_outside();
}

// ---------------------------------------------------------------------------
// Error norms.

struct ProbeError {
  double x = 0.0;
  double numerical = 0.0;
  double reference = 0.0;
  double error = 0.0;
};

struct ErrorReport {
  Eigen::VectorXd pointwise;
  double linf = 0.0;
  double l2 = 0.0;  ///< sqrt(sum_i w_i e_i^2) over included nodes, w = CGL quadrature weights
  std::vector<double> discontinuities;
  double exclusion_halfwidth = 0.0;
  long included_nodes = 0;
  std::vector<ProbeError> probes;
};

/// Norms over nodes farther than `exclusion_halfwidth` from every listed discontinuity.
inline ErrorReport error_report(const SpectralGrid& grid, const Eigen::VectorXd& numerical,
                                const Eigen::VectorXd& reference, std::span<const double> discontinuities,
                                double exclusion_halfwidth) {
  if (numerical.size() != grid.size() || reference.size() != grid.size()) {
    throw std::invalid_argument("error_report: arrays must have N+1 entries");
  }
  ErrorReport r;
  r.pointwise = (numerical - reference).cwiseAbs();
  r.discontinuities.assign(discontinuities.begin(), discontinuities.end());
  r.exclusion_halfwidth = exclusion_halfwidth;
  const QuadratureRule rule = clenshaw_curtis(grid.order(), 0.0, 1.0);
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double xi = grid.node(i);
    const bool excluded = std::any_of(discontinuities.begin(), discontinuities.end(),
                                      [&](double d) { return std::abs(xi - d) < exclusion_halfwidth; });
    if (excluded) continue;
    ++r.included_nodes;
    r.linf = std::max(r.linf, r.pointwise(i));
    sum += rule.weights(i) * r.pointwise(i) * r.pointwise(i);
  }
  r.l2 = std::sqrt(sum);
  return r;
}

/// Error of the interpolated numerical solution at an off-grid point.
inline ProbeError probe_error(const SpectralGrid& grid, const Eigen::VectorXd& numerical, double x,
                              double reference_value) {
  ProbeError p;
  p.x = x;
  p.numerical = interpolate(grid, numerical, x);
  p.reference = reference_value;
  p.error = std::abs(p.numerical - p.reference);
  return p;
}

/// Least-squares slope of log(error) against log(epsilon).
inline double fit_rate(std::span<const double> epsilon, std::span<const double> error) {
  if (epsilon.size() != error.size() || epsilon.size() < 2) {
    throw std::invalid_argument("fit_rate: need at least two (epsilon, error) pairs");
  }
  const auto n = static_cast<double>(epsilon.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < epsilon.size(); ++i) {
    const double lx = std::log(epsilon[i]);
    const double ly = std::log(error[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace deltafilter
