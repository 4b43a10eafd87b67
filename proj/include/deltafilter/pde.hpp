#pragma once

// Collocation right-hand sides and the third-order TVD Runge-Kutta step.
//
// 1D arrays are (N+1) x c with one column per conserved component.
// 2D Euler states are (Nx+1) x 4(Ny+1): four (Nx+1) x (Ny+1) blocks side by side
// for rho, rho u, rho v, rho E, with U(i, j) = u(x_i, y_j) inside each block.

#include <cmath>

#include <Eigen/Dense>

#include "deltafilter/errors.hpp"
#include "deltafilter/gas.hpp"
#include "deltafilter/spectral.hpp"

namespace deltafilter {

struct State1D {
  Eigen::MatrixXd values;  ///< (N+1) x components
  double time = 0.0;

  int components() const noexcept { return static_cast<int>(values.cols()); }
};

struct State2D {
  Eigen::MatrixXd values;  ///< (Nx+1) x 4(Ny+1)
  int ny_nodes = 0;        ///< Ny+1
  double time = 0.0;

  auto component(int c) { return values.middleCols(c * ny_nodes, ny_nodes); }
  auto component(int c) const { return values.middleCols(c * ny_nodes, ny_nodes); }
};

/// -D u. The inflow value at x = -1 is imposed by the stage hook, not here.
inline Eigen::VectorXd rhs_advection(const SpectralGrid& grid, const Eigen::VectorXd& u) {
  return -(grid.diff_matrix() * u);
}

/// -(1/2) D (u o u), with the pinned boundary nodes held fixed.
inline Eigen::VectorXd rhs_burgers(const SpectralGrid& grid, const Eigen::VectorXd& u) {
  Eigen::VectorXd r = -0.5 * (grid.diff_matrix() * u.cwiseProduct(u));
  r(0) = 0.0;
  r(r.size() - 1) = 0.0;
  return r;
}

namespace detail {

inline void require_physical(double rho, double p, long node, double time) {
  if (!std::isfinite(rho) || !std::isfinite(p)) {
    throw SimulationError("non-finite state at node " + std::to_string(node) + ", t=" + std::to_string(time));
  }
  if (!(rho > 0.0)) throw PositivityError("density", node, time, rho);
  if (!(p > 0.0)) throw PositivityError("pressure", node, time, p);
}

}  // namespace detail

/// Throws PositivityError / SimulationError unless every node has finite, positive rho and p.
inline void check_state_1d(const Eigen::MatrixXd& u, const GasModel& gas, double time) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const auto w = to_primitive(Conserved1D{u(i, 0), u(i, 1), u(i, 2)}, gas);
    detail::require_physical(w.rho, w.p, static_cast<long>(i), time);
  }
}

inline void check_state_2d(const Eigen::MatrixXd& u, int ny_nodes, const GasModel& gas, double time) {
  const Eigen::Index nx = u.rows();
  for (Eigen::Index j = 0; j < ny_nodes; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      const auto w = to_primitive(
          {u(i, j), u(i, ny_nodes + j), u(i, 2 * ny_nodes + j), u(i, 3 * ny_nodes + j)}, gas);
      detail::require_physical(w.rho, w.p, static_cast<long>(i * ny_nodes + j), time);
    }
  }
}

/// -D F(U) for U = (rho, rho u, rho E), F = (rho u, rho u^2 + p, (rho E + p) u).
inline Eigen::MatrixXd rhs_euler_1d(const SpectralGrid& grid, const Eigen::MatrixXd& u, const GasModel& gas,
                                    double time = 0.0) {
  if (u.rows() != grid.size() || u.cols() != 3) throw std::invalid_argument("rhs_euler_1d: expected (N+1) x 3 state");
  Eigen::MatrixXd flux(u.rows(), 3);
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double rho = u(i, 0);
    const double mom = u(i, 1);
    const double energy = u(i, 2);
    const double vel = mom / rho;
    const double p = (gas.gamma - 1.0) * (energy - 0.5 * mom * vel);
    detail::require_physical(rho, p, static_cast<long>(i), time);
    flux(i, 0) = mom;
    flux(i, 1) = mom * vel + p;
    flux(i, 2) = (energy + p) * vel;
  }
  return -(grid.diff_matrix() * flux);
}

/// -(d F_x/dx + d F_y/dy) with
///   F_x = (rho u, rho u^2 + p, rho u v, (rho E + p) u)
///   F_y = (rho v, rho u v, rho v^2 + p, (rho E + p) v).
inline Eigen::MatrixXd rhs_euler_2d(const SpectralGrid& gx, const SpectralGrid& gy, const Eigen::MatrixXd& u,
                                    const GasModel& gas, double time = 0.0) {
  const int nx = gx.size();
  const int ny = gy.size();
  if (u.rows() != nx || u.cols() != 4 * ny) throw std::invalid_argument("rhs_euler_2d: expected (Nx+1) x 4(Ny+1) state");
  Eigen::MatrixXd fx(nx, 4 * ny);
  Eigen::MatrixXd fy(nx, 4 * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double rho = u(i, j);
      const double mx = u(i, ny + j);
      const double my = u(i, 2 * ny + j);
      const double energy = u(i, 3 * ny + j);
      const double vx = mx / rho;
      const double vy = my / rho;
      const double p = (gas.gamma - 1.0) * (energy - 0.5 * (mx * vx + my * vy));
      detail::require_physical(rho, p, static_cast<long>(i) * ny + j, time);
      fx(i, j) = mx;
      fx(i, ny + j) = mx * vx + p;
      fx(i, 2 * ny + j) = mx * vy;
      fx(i, 3 * ny + j) = (energy + p) * vx;
      fy(i, j) = my;
      fy(i, ny + j) = my * vx;
      fy(i, 2 * ny + j) = my * vy + p;
      fy(i, 3 * ny + j) = (energy + p) * vy;
    }
  }
  Eigen::MatrixXd r = -(gx.diff_matrix() * fx);
  const Eigen::MatrixXd dyt = gy.diff_matrix().transpose();
  for (int c = 0; c < 4; ++c) r.middleCols(c * ny, ny).noalias() -= fy.middleCols(c * ny, ny) * dyt;
  return r;
}

/// One TVD-RK3 step from time t:
///   u1 = u + dt L(u)
///   u2 = 3/4 u + 1/4 u1 + 1/4 dt L(u1)
///   u' = 1/3 u + 2/3 u2 + 2/3 dt L(u2)
/// `hook(stage, stage_time)` runs after every stage (boundary enforcement).
template <class Array, class Rhs, class Hook>
Array tvd_rk3_step(const Array& un, double t, double dt, Rhs&& rhs, Hook&& hook) {
  if (!(dt > 0.0)) throw std::invalid_argument("tvd_rk3_step: dt must be positive");
  Array u1 = un + dt * rhs(un, t);
  hook(u1, t + dt);
  Array u2 = 0.75 * un + 0.25 * u1 + 0.25 * dt * rhs(u1, t + dt);
  hook(u2, t + 0.5 * dt);
  Array out = (1.0 / 3.0) * un + (2.0 / 3.0) * u2 + (2.0 / 3.0) * dt * rhs(u2, t + 0.5 * dt);
  hook(out, t + dt);
  return out;
}

template <class Array, class Rhs>
Array tvd_rk3_step(const Array& un, double t, double dt, Rhs&& rhs) {
  return tvd_rk3_step(un, t, dt, std::forward<Rhs>(rhs), [](Array&, double) {});
}

}  // namespace deltafilter
