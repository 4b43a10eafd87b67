#pragma once

// Dirac-delta filtering matrix.
//
// Row j of S holds the weights that map nodal values to the convolution of the
// degree-N interpolant with delta_eps centred at x_j:
//   S(j, i) = int_{x_j-eps}^{x_j+eps} l_i(tau) delta_eps(x_j - tau) dtau,
// so that filtered = S * u. Rows whose support leaves [-1, 1] (|x_j| > 1 - eps)
// are identity rows. The integrand is a polynomial of degree N + M and the
// Clenshaw-Curtis rule of order Q = M + N + 2 integrates it exactly.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "deltafilter/errors.hpp"
#include "deltafilter/kernel.hpp"
#include "deltafilter/spectral.hpp"

namespace deltafilter {

/// eps = sin(pi N_d / (2N)): the kernel spans about N_d nodes at the domain centre.
inline double scaling_parameter(int n, double nd) {
  if (!(nd > 0.0)) throw ConfigError("Nd", "must be positive");
  if (!(nd < n)) throw ConfigError("Nd", "must be smaller than N (support would exceed the domain)");
  return std::sin(std::numbers::pi * nd / (2.0 * n));
}

/// eps = scale * N^{-k/(m+k+2)}. Alternative rule for inexact convolution quadrature; not the default.
inline double theoretical_scaling_parameter(int n, const KernelSpec& spec, double scale = 1.0) {
  return scale * std::pow(static_cast<double>(n), -static_cast<double>(spec.k) / (spec.m + spec.k + 2));
}

/// Quadrature order used for the filter integrals.
inline int filter_quadrature_order(int n, const KernelSpec& spec) { return spec.degree() + n + 2; }

class FilterMatrix {
public:
  FilterMatrix() = default;

  const Eigen::MatrixXd& matrix() const noexcept { return s_; }
  double epsilon() const noexcept { return epsilon_; }
  const KernelSpec& spec() const noexcept { return spec_; }
  int order() const noexcept { return static_cast<int>(s_.rows()) - 1; }
  int size() const noexcept { return static_cast<int>(s_.rows()); }
  /// interior_mask()[j] is true when row j is filtered.
  const std::vector<bool>& interior_mask() const noexcept { return interior_; }
  bool is_interior(int j) const { return interior_[static_cast<std::size_t>(j)]; }

private:
  friend FilterMatrix build_filter_matrix(const SpectralGrid&, const DeltaKernel&, double);

  Eigen::MatrixXd s_;
  double epsilon_ = 0.0;
  KernelSpec spec_{};
  std::vector<bool> interior_;
};

inline FilterMatrix build_filter_matrix(const SpectralGrid& grid, const DeltaKernel& kernel, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon", "filter half-width must lie in (0, 1)");
  const int n = grid.order();
  const int q_order = filter_quadrature_order(n, kernel.spec());

  // Reference rule on [-1, 1]. With tau_q = x_j - eps cos(pi q/Q), the kernel argument
  // (x_j - tau_q)/eps = cos(pi q/Q) is row independent and eps cancels against the weight scaling.
  const QuadratureRule ref = clenshaw_curtis(q_order, 0.0, 1.0);
  Eigen::VectorXd kernel_weights(q_order + 1);
  Eigen::VectorXd offsets(q_order + 1);
  for (int q = 0; q <= q_order; ++q) {
    const double xi = std::cos(std::numbers::pi * q / q_order);
    kernel_weights(q) = ref.weights(q) * kernel(xi);
    offsets(q) = -epsilon * xi;
  }

  FilterMatrix f;
  f.s_ = Eigen::MatrixXd::Identity(n + 1, n + 1);
  f.epsilon_ = epsilon;
  f.spec_ = kernel.spec();
  f.interior_.assign(static_cast<std::size_t>(n + 1), false);
  for (int j = 0; j <= n; ++j) f.interior_[static_cast<std::size_t>(j)] = std::abs(grid.node(j)) <= 1.0 - epsilon;

  // The kernel is even, so S(N-j, N-i) = S(j, i); assemble the lower half and mirror.
  const bool mirror = kernel.is_even();
  const int last_row = mirror ? n / 2 : n;
  constexpr double kSupportSlack = 1e-13;

  Eigen::RowVectorXd basis(n + 1);
  const auto nodes = grid.node_span();
  const auto bary = grid.bary_span();
  for (int j = 0; j <= last_row; ++j) {
    if (!f.is_interior(j)) continue;
    const double xj = grid.node(j);
    if (xj - epsilon < -1.0 - kSupportSlack || xj + epsilon > 1.0 + kSupportSlack) {
      throw std::logic_error("filter support leaves the domain for an interior row");
    }
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n + 1);
    for (int q = 0; q <= q_order; ++q) {
      lagrange_basis(nodes, bary, xj + offsets(q), {basis.data(), static_cast<std::size_t>(n + 1)});
      row += kernel_weights(q) * basis;
    }
    f.s_.row(j) = row;
  }
  if (mirror) {
    if (f.is_interior(n / 2)) {
      for (int i = n / 2 + 1; i <= n; ++i) f.s_(n / 2, i) = f.s_(n / 2, n - i);
    }
    for (int j = n / 2 + 1; j <= n; ++j) {
      if (!f.is_interior(j)) continue;
      for (int i = 0; i <= n; ++i) f.s_(j, i) = f.s_(n - j, n - i);
    }
  }
  return f;
}

/// filtered = S * u.
inline Eigen::VectorXd apply_1d(const FilterMatrix& filter, const Eigen::VectorXd& u) {
  if (u.size() != filter.size()) {
    throw std::invalid_argument("apply_1d: expected " + std::to_string(filter.size()) + " values, got " +
                                std::to_string(u.size()));
  }
  return filter.matrix() * u;
}

/// Filters every column of a (N+1) x c block of components.
inline Eigen::MatrixXd apply_columns(const FilterMatrix& filter, const Eigen::MatrixXd& u) {
  if (u.rows() != filter.size()) throw std::invalid_argument("apply_columns: row count does not match filter");
  return filter.matrix() * u;
}

/// filtered = Sx * U * Sy^T for U(i, j) = u(x_i, y_j).
inline Eigen::MatrixXd apply_2d(const FilterMatrix& sx, const FilterMatrix& sy, const Eigen::MatrixXd& u) {
  if (u.rows() != sx.size() || u.cols() != sy.size()) {
    throw std::invalid_argument("apply_2d: nodal array is " + std::to_string(u.rows()) + "x" +
                                std::to_string(u.cols()) + ", filters expect " + std::to_string(sx.size()) +
                                "x" + std::to_string(sy.size()));
  }
  return sx.matrix() * u * sy.matrix().transpose();
}

/// e = |u - S u|, a smoothness diagnostic: small in smooth regions, large near discontinuities.
inline Eigen::VectorXd filter_error_indicator(const FilterMatrix& filter, const Eigen::VectorXd& u) {
  return (u - apply_1d(filter, u)).cwiseAbs();
}

}  // namespace deltafilter
