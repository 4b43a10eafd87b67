#pragma once

// Drives one benchmark case from initial data to t_final.
//
// Linear advection: the initial condition is filtered once, then integrated unfiltered.
// Burgers and Euler: every conserved component is filtered after each RK step, and the
// nodes the filter cannot reach (|x| > 1 - eps) are reset to the exact far-field state.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deltafilter/config.hpp"
#include "deltafilter/filter.hpp"
#include "deltafilter/gas.hpp"
#include "deltafilter/kernel.hpp"
#include "deltafilter/pde.hpp"
#include "deltafilter/reference.hpp"
#include "deltafilter/spectral.hpp"

namespace deltafilter {

struct RunResult {
  CaseConfig config;
  double epsilon = 0.0;    ///< eps in x (1D: the only one)
  double epsilon_y = 0.0;  ///< 2D only
  long steps = 0;
  long filter_applications = 0;
  double final_time = 0.0;
  double cfl = 0.0;  ///< max wave speed * dt / smallest node spacing, at t = 0

  Eigen::VectorXd x;
  Eigen::VectorXd y;  ///< empty for 1D cases

  /// 1D: (N+1) x c primitive variables. 2D: (Nx+1)(Ny+1) x 4 rows, row = i (Ny+1) + j.
  Eigen::MatrixXd numerical;
  std::vector<std::string> numerical_columns;
  Eigen::MatrixXd reference;  ///< empty when no reference is available
  std::vector<std::string> reference_columns;
  std::string reference_note;  ///< why the reference is missing, if it is

  std::optional<ErrorReport> error;  ///< on the first column (u or rho)

  Eigen::MatrixXd conserved;  ///< final conserved state (1D: (N+1) x c, 2D: (Nx+1) x 4(Ny+1))
  double integral_initial = 0.0;  ///< int of the first conserved component at t = 0
  double integral_final = 0.0;
};

namespace detail {

inline double min_spacing(const SpectralGrid& g) { return g.node(1) - g.node(0); }

inline Eigen::MatrixXd primitive_columns_1d(const Eigen::MatrixXd& u, const GasModel& gas) {
  Eigen::MatrixXd w(u.rows(), 3);
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const auto p = to_primitive(Conserved1D{u(i, 0), u(i, 1), u(i, 2)}, gas);
    w(i, 0) = p.rho;
    w(i, 1) = p.u;
    w(i, 2) = p.p;
  }
  return w;
}

inline void set_conserved(Eigen::MatrixXd& u, Eigen::Index i, const Primitive1D& w, const GasModel& gas) {
  const auto q = to_conserved(w, gas);
  u(i, 0) = q.rho;
  u(i, 1) = q.mom;
  u(i, 2) = q.energy;
}

inline double cgl_integral(const SpectralGrid& grid, const Eigen::VectorXd& v) {
  return clenshaw_curtis(grid.order(), 0.0, 1.0).weights.dot(v);
}

inline void require_finite(const Eigen::MatrixXd& u, double t) {
  if (!u.allFinite()) throw SimulationError("non-finite solution at t=" + std::to_string(t));
}

struct Euler1DSetup {
  std::function<Primitive1D(double)> initial;
  std::function<Primitive1D(double, double)> far_field;  ///< exact state near the boundaries at (x, t)
};

inline RunResult run_euler_1d(const CaseConfig& cfg, const Euler1DSetup& setup) {
  const GasModel gas{cfg.gamma};
  const SpectralGrid grid(cfg.n);
  const double eps = cfg.epsilon_for(cfg.n);
  const FilterMatrix filter = build_filter_matrix(grid, build_kernel(cfg.kernel), eps);
  const int n = cfg.n;

  RunResult r;
  r.config = cfg;
  r.epsilon = eps;
  r.x = grid.nodes();

  Eigen::MatrixXd u(n + 1, 3);
  double max_speed = 0.0;
  for (int i = 0; i <= n; ++i) {
    const Primitive1D w = setup.initial(grid.node(i));
    set_conserved(u, i, w, gas);
    max_speed = std::max(max_speed, std::abs(w.u) + gas.sound_speed(w.rho, w.p));
  }
  r.cfl = max_speed * cfg.dt / min_spacing(grid);
  r.integral_initial = cgl_integral(grid, u.col(0));

  auto rhs = [&](const Eigen::MatrixXd& v, double t) { return rhs_euler_1d(grid, v, gas, t); };
  auto hook = [&](Eigen::MatrixXd& v, double t) {
    set_conserved(v, 0, setup.far_field(grid.node(0), t), gas);
    set_conserved(v, n, setup.far_field(grid.node(n), t), gas);
  };

  const long steps = cfg.steps();
  for (long s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * cfg.dt;
    const double t_next = static_cast<double>(s + 1) * cfg.dt;
    u = tvd_rk3_step(u, t, cfg.dt, rhs, hook);
    u = apply_columns(filter, u);
    ++r.filter_applications;
    for (int i = 0; i <= n; ++i) {
      if (!filter.is_interior(i)) set_conserved(u, i, setup.far_field(grid.node(i), t_next), gas);
    }
    check_state_1d(u, gas, t_next);
  }
  r.steps = steps;
  r.final_time = static_cast<double>(steps) * cfg.dt;
  r.conserved = u;
  r.integral_final = cgl_integral(grid, u.col(0));
  r.numerical = primitive_columns_1d(u, gas);
  r.numerical_columns = {"rho", "u", "p"};
  return r;
}

inline void finish_scalar(RunResult& r, const SpectralGrid& grid, const Eigen::VectorXd& u,
                          const std::function<double(double)>& exact, std::vector<double> discontinuities,
                          double halfwidth) {
  r.numerical = u;
  r.numerical_columns = {"u"};
  Eigen::VectorXd ref(grid.size());
  for (int i = 0; i < grid.size(); ++i) ref(i) = exact(grid.node(i));
  r.reference = ref;
  r.reference_columns = {"u_ref"};
  r.error = error_report(grid, u, ref, discontinuities, halfwidth);
  for (double p : r.config.probes) r.error->probes.push_back(probe_error(grid, u, p, exact(p)));
}

inline RunResult run_advection(const CaseConfig& cfg) {
  const SpectralGrid grid(cfg.n);
  const double eps = cfg.epsilon_for(cfg.n);
  const FilterMatrix filter = build_filter_matrix(grid, build_kernel(cfg.kernel), eps);

  RunResult r;
  r.config = cfg;
  r.epsilon = eps;
  r.x = grid.nodes();
  r.cfl = cfg.dt / min_spacing(grid);

  Eigen::VectorXd u(grid.size());
  for (int i = 0; i < grid.size(); ++i) u(i) = advection_initial(grid.node(i));
  u = apply_1d(filter, u);
  ++r.filter_applications;
  r.integral_initial = cgl_integral(grid, u);

  auto rhs = [&](const Eigen::VectorXd& v, double) { return rhs_advection(grid, v); };
  auto hook = [](Eigen::VectorXd& v, double t) { v(0) = advection_inflow(t); };
  const long steps = cfg.steps();
  for (long s = 0; s < steps; ++s) {
    u = tvd_rk3_step(u, static_cast<double>(s) * cfg.dt, cfg.dt, rhs, hook);
  }
  require_finite(u, static_cast<double>(steps) * cfg.dt);
  r.steps = steps;
  r.final_time = static_cast<double>(steps) * cfg.dt;
  r.conserved = u;
  r.integral_final = cgl_integral(grid, u);
  const double t_end = r.final_time;
  finish_scalar(r, grid, u, [t_end](double x) { return exact_advection(x, t_end); },
                {advection_jump_location(t_end)}, cfg.exclusion.value_or(eps));
  return r;
}

inline RunResult run_burgers(const CaseConfig& cfg) {
  const SpectralGrid grid(cfg.n);
  const double eps = cfg.epsilon_for(cfg.n);
  const FilterMatrix filter = build_filter_matrix(grid, build_kernel(cfg.kernel), eps);
  const int n = cfg.n;

  RunResult r;
  r.config = cfg;
  r.epsilon = eps;
  r.x = grid.nodes();
  r.cfl = cfg.dt / min_spacing(grid);

  Eigen::VectorXd u(n + 1);
  for (int i = 0; i <= n; ++i) u(i) = burgers_initial(grid.node(i));
  r.integral_initial = cgl_integral(grid, u);

  auto rhs = [&](const Eigen::VectorXd& v, double) { return rhs_burgers(grid, v); };
  auto hook = [n](Eigen::VectorXd& v, double) {
    v(0) = 0.0;
    v(n) = 0.0;
  };
  const long steps = cfg.steps();
  for (long s = 0; s < steps; ++s) {
    const double t_next = static_cast<double>(s + 1) * cfg.dt;
    u = tvd_rk3_step(u, static_cast<double>(s) * cfg.dt, cfg.dt, rhs, hook);
    u = apply_1d(filter, u);
    ++r.filter_applications;
    for (int i = 0; i <= n; ++i) {
      if (!filter.is_interior(i)) u(i) = exact_burgers(grid.node(i), t_next);
    }
    require_finite(u, t_next);
  }
  r.steps = steps;
  r.final_time = static_cast<double>(steps) * cfg.dt;
  r.conserved = u;
  r.integral_final = cgl_integral(grid, u);
  const double t_end = r.final_time;
  std::vector<double> shocks;
  if (t_end > burgers_shock_time()) shocks.push_back(0.0);
  finish_scalar(r, grid, u, [t_end](double x) { return exact_burgers(x, t_end); }, shocks,
                cfg.exclusion.value_or(0.1));
  return r;
}

inline RunResult run_sod(const CaseConfig& cfg) {
  const GasModel gas{cfg.gamma};
  const RiemannSolution exact = solve_riemann(sod_left(), sod_right(), gas);
  const double x0 = cfg.interface;
  Euler1DSetup setup{[&](double x) { return x < x0 ? sod_left() : sod_right(); },
                     [&](double x, double t) { return exact.sample(x, t, x0); }};
  RunResult r = run_euler_1d(cfg, setup);
  const SpectralGrid grid(cfg.n);
  Eigen::MatrixXd ref(grid.size(), 3);
  for (int i = 0; i < grid.size(); ++i) {
    const auto w = exact.sample(grid.node(i), r.final_time, x0);
    ref.row(i) << w.rho, w.u, w.p;
  }
  r.reference = ref;
  r.reference_columns = {"rho_ref", "u_ref", "p_ref"};
  std::vector<double> jumps;
  for (double s : exact.discontinuity_speeds()) jumps.push_back(x0 + s * r.final_time);
  r.error = error_report(grid, r.numerical.col(0), ref.col(0), jumps, cfg.exclusion.value_or(r.epsilon));
  for (double p : cfg.probes) {
    r.error->probes.push_back(probe_error(grid, r.numerical.col(0), p, exact.sample(p, r.final_time, x0).rho));
  }
  return r;
}

inline RunResult run_shu_osher(const CaseConfig& cfg) {
  ShuOsherSetup geometry;
  geometry.interface = cfg.interface;
  // Upstream of the shock the flow is the constant post-shock state and downstream it is at
  // rest, so within the run horizon the boundary zones keep their initial values.
  Euler1DSetup setup{[&](double x) { return shu_osher_initial(x, geometry); },
                     [&](double x, double) { return shu_osher_initial(x, geometry); }};
  RunResult r = run_euler_1d(cfg, setup);
  const SpectralGrid grid(cfg.n);
  try {
    const auto ref = ShuOsherReference::load_default(geometry);
    if (!ref.has_time(r.final_time)) throw ReferenceUnavailable("no reference profile at t=" + std::to_string(r.final_time));
    Eigen::VectorXd rho(grid.size());
    for (int i = 0; i < grid.size(); ++i) rho(i) = ref.density(grid.node(i), r.final_time);
    r.reference = rho;
    r.reference_columns = {"rho_ref"};
    std::vector<double> jumps;
    const double halfwidth = cfg.exclusion.value_or(0.0);
    if (halfwidth > 0.0) jumps.push_back(ref.shock_location(r.final_time));
    r.error = error_report(grid, r.numerical.col(0), rho, jumps, halfwidth);
    for (double p : cfg.probes) {
      r.error->probes.push_back(probe_error(grid, r.numerical.col(0), p, ref.density(p, r.final_time)));
    }
  } catch (const ReferenceUnavailable& e) {
    r.reference_note = e.what();
  }
  return r;
}

inline void set_conserved_2d(Eigen::MatrixXd& u, int ny, Eigen::Index i, Eigen::Index j, const Conserved2D& q) {
  u(i, j) = q.rho;
  u(i, ny + j) = q.mom_x;
  u(i, 2 * ny + j) = q.mom_y;
  u(i, 3 * ny + j) = q.energy;
}

inline RunResult run_explosion(const CaseConfig& cfg) {
  const GasModel gas{cfg.gamma};
  const SpectralGrid gx(cfg.nx);
  const SpectralGrid gy(cfg.ny);
  const DeltaKernel kernel = build_kernel(cfg.kernel);
  const double eps_x = cfg.epsilon_for(cfg.nx);
  const double eps_y = cfg.epsilon_for(cfg.ny);
  const FilterMatrix sx = build_filter_matrix(gx, kernel, eps_x);
  const FilterMatrix sy = build_filter_matrix(gy, kernel, eps_y);
  const int nx = gx.size();
  const int ny = gy.size();

  RunResult r;
  r.config = cfg;
  r.epsilon = eps_x;
  r.epsilon_y = eps_y;
  r.x = gx.nodes();
  r.y = gy.nodes();

  Eigen::MatrixXd u(nx, 4 * ny);
  double max_speed = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Primitive2D w = explosion_initial(gx.node(i), gy.node(j));
      set_conserved_2d(u, ny, i, j, to_conserved(w, gas));
      max_speed = std::max(max_speed, std::hypot(w.u, w.v) + gas.sound_speed(w.rho, w.p));
    }
  }
  r.cfl = max_speed * cfg.dt / std::min(min_spacing(gx), min_spacing(gy));
  const Eigen::VectorXd wx = clenshaw_curtis(gx.order(), 0.0, 1.0).weights;
  const Eigen::VectorXd wy = clenshaw_curtis(gy.order(), 0.0, 1.0).weights;
  r.integral_initial = wx.dot(u.leftCols(ny) * wy);

  const Conserved2D outside = to_conserved(explosion_outside(), gas);
  auto rhs = [&](const Eigen::MatrixXd& v, double t) { return rhs_euler_2d(gx, gy, v, gas, t); };
  auto hook = [&](Eigen::MatrixXd& v, double) {
    for (int i = 0; i < nx; ++i) {
      set_conserved_2d(v, ny, i, 0, outside);
      set_conserved_2d(v, ny, i, ny - 1, outside);
    }
    for (int j = 0; j < ny; ++j) {
      set_conserved_2d(v, ny, 0, j, outside);
      set_conserved_2d(v, ny, nx - 1, j, outside);
    }
  };
  const Eigen::MatrixXd syt = sy.matrix().transpose();

  const long steps = cfg.steps();
  for (long s = 0; s < steps; ++s) {
    const double t_next = static_cast<double>(s + 1) * cfg.dt;
    u = tvd_rk3_step(u, static_cast<double>(s) * cfg.dt, cfg.dt, rhs, hook);
    Eigen::MatrixXd half = sx.matrix() * u;
    for (int c = 0; c < 4; ++c) u.middleCols(c * ny, ny).noalias() = half.middleCols(c * ny, ny) * syt;
    ++r.filter_applications;
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        if (!sx.is_interior(i) || !sy.is_interior(j)) set_conserved_2d(u, ny, i, j, outside);
      }
    }
    check_state_2d(u, ny, gas, t_next);
  }
  r.steps = steps;
  r.final_time = static_cast<double>(steps) * cfg.dt;
  r.conserved = u;
  r.integral_final = wx.dot(u.leftCols(ny) * wy);

  r.numerical.resize(static_cast<Eigen::Index>(nx) * ny, 4);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const auto w = to_primitive({u(i, j), u(i, ny + j), u(i, 2 * ny + j), u(i, 3 * ny + j)}, gas);
      r.numerical.row(static_cast<Eigen::Index>(i) * ny + j) << w.rho, w.u, w.v, w.p;
    }
  }
  r.numerical_columns = {"rho", "u", "v", "p"};
  r.reference_note = "no exact solution for the 2D explosion; see radial.csv";
  return r;
}

}  // namespace detail

/// Runs the configured case on the configured grid (cfg.n, or cfg.nx x cfg.ny for 2D).
/// Throws SimulationError (incl. PositivityError) if the run breaks down.
inline RunResult run_case(const CaseConfig& cfg) {
  validate(cfg);
  switch (cfg.problem) {
    case Case::advection: return detail::run_advection(cfg);
    case Case::burgers: return detail::run_burgers(cfg);
    case Case::sod: return detail::run_sod(cfg);
    case Case::shu_osher: return detail::run_shu_osher(cfg);
    case Case::explosion: return detail::run_explosion(cfg);
  }
  throw ConfigError("case", "unhandled case");
}

/// Density along the positive x axis and along the 45-degree diagonal at common radii.
struct RadialProfiles {
  std::vector<double> radius;
  std::vector<double> axis;
  std::vector<double> diagonal;
};

inline RadialProfiles radial_profiles(const SpectralGrid& gx, const SpectralGrid& gy, const Eigen::MatrixXd& density,
                                      double r_max, int samples) {
  RadialProfiles p;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int s = 0; s < samples; ++s) {
    const double r = r_max * s / (samples - 1);
    p.radius.push_back(r);
    p.axis.push_back(interpolate_2d(gx, gy, density, r, 0.0));
    p.diagonal.push_back(interpolate_2d(gx, gy, density, r * inv_sqrt2, r * inv_sqrt2));
  }
  return p;
}

}  // namespace deltafilter
