#pragma once

// Chebyshev-Gauss-Lobatto collocation on [-1, 1]: nodes x_i = -cos(i pi / N),
// the collocation differentiation matrix, barycentric Lagrange evaluation and
// Clenshaw-Curtis quadrature on arbitrary intervals.

#include <cmath>
#include <numbers>
#include <span>

#include <Eigen/Dense>

#include "deltafilter/errors.hpp"

namespace deltafilter {

/// N+1 ascending CGL nodes. Written as sin((2i-N) pi / 2N) so that x_{N-i} == -x_i exactly.
inline Eigen::VectorXd cgl_nodes(int n) {
  if (n < 1) throw ConfigError("N", "polynomial order must be >= 1");
  Eigen::VectorXd x(n + 1);
  for (int i = 0; i <= n / 2; ++i) {
    x(i) = std::sin(std::numbers::pi * (2.0 * i - n) / (2.0 * n));
    x(n - i) = -x(i);
  }
  if (n % 2 == 0) x(n / 2) = 0.0;
  return x;
}

/// Barycentric weights for CGL nodes: (-1)^j, halved at the two endpoints.
inline Eigen::VectorXd cgl_barycentric_weights(int n) {
  Eigen::VectorXd w(n + 1);
  for (int j = 0; j <= n; ++j) w(j) = (j % 2 == 0) ? 1.0 : -1.0;
  w(0) *= 0.5;
  w(n) *= 0.5;
  return w;
}

/// Values l_0(x)..l_N(x) of the Lagrange basis on the given nodes, barycentric form.
inline void lagrange_basis(std::span<const double> nodes, std::span<const double> bary, double x,
                           std::span<double> out) {
  const std::size_t n = nodes.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (x == nodes[j]) {
      for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
      out[j] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = bary[j] / (x - nodes[j]);
    denom += out[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] /= denom;
}

class SpectralGrid {
public:
  /// N must be even and >= 4.
  explicit SpectralGrid(int n) : n_(n) {
    if (n < 4 || n % 2 != 0) throw ConfigError("N", "must be an even integer >= 4, got " + std::to_string(n));
    nodes_ = cgl_nodes(n);
    bary_ = cgl_barycentric_weights(n);
    build_differentiation_matrix();
  }

  int order() const noexcept { return n_; }
  int size() const noexcept { return n_ + 1; }
  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }
  double node(int i) const noexcept { return nodes_(i); }
  const Eigen::MatrixXd& diff_matrix() const noexcept { return diff_; }
  const Eigen::VectorXd& bary_weights() const noexcept { return bary_; }

  std::span<const double> node_span() const noexcept { return {nodes_.data(), static_cast<std::size_t>(nodes_.size())}; }
  std::span<const double> bary_span() const noexcept { return {bary_.data(), static_cast<std::size_t>(bary_.size())}; }

  /// Row vector of Lagrange basis values at x.
  Eigen::RowVectorXd basis_at(double x) const {
    Eigen::RowVectorXd row(size());
    lagrange_basis(node_span(), bary_span(), x, {row.data(), static_cast<std::size_t>(row.size())});
    return row;
  }

private:
  void build_differentiation_matrix() {
    const int n = n_;
    diff_ = Eigen::MatrixXd::Zero(n + 1, n + 1);
    auto c = [n](int i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
    const double h = std::numbers::pi / (2.0 * n);
    // Rows 0..N/2 directly; remaining rows by D_{N-i,N-j} = -D_{i,j}.
    for (int i = 0; i <= n / 2; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j <= n; ++j) {
        if (j == i) continue;
        // x_i - x_j with the difference taken analytically to avoid cancellation.
        const double dx = 2.0 * std::sin((i + j) * h) * std::sin((i - j) * h);
        const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        diff_(i, j) = (c(i) / c(j)) * sign / dx;
        row_sum += diff_(i, j);
      }
      diff_(i, i) = -row_sum;
    }
    diff_(n / 2, n / 2) = 0.0;
    for (int j = n / 2 + 1; j <= n; ++j) diff_(n / 2, j) = -diff_(n / 2, n - j);
    for (int i = n / 2 + 1; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) diff_(i, j) = -diff_(n - i, n - j);
    }
  }

  int n_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd bary_;
  Eigen::MatrixXd diff_;
};

inline SpectralGrid build_grid(int n) { return SpectralGrid(n); }

/// Barycentric evaluation of the degree-N interpolant of `values` at x.
inline double interpolate(const SpectralGrid& grid, std::span<const double> values, double x) {
  const auto nodes = grid.node_span();
  const auto w = grid.bary_span();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (x == nodes[j]) return values[j];
    const double t = w[j] / (x - nodes[j]);
    num += t * values[j];
    den += t;
  }
  return num / den;
}

inline double interpolate(const SpectralGrid& grid, const Eigen::VectorXd& values, double x) {
  return interpolate(grid, std::span<const double>(values.data(), static_cast<std::size_t>(values.size())), x);
}

/// Tensor-product interpolation of U(i,j) = u(x_i, y_j) at (x, y).
inline double interpolate_2d(const SpectralGrid& gx, const SpectralGrid& gy, const Eigen::MatrixXd& values,
                             double x, double y) {
  const Eigen::RowVectorXd lx = gx.basis_at(x);
  const Eigen::RowVectorXd ly = gy.basis_at(y);
  return lx * values * ly.transpose();
}

struct QuadratureRule {
  int order = 0;  ///< Q; the rule has Q+1 nodes
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  /// Highest monomial degree integrated exactly.
  int exactness_degree() const noexcept { return order % 2 == 0 ? order + 1 : order; }

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (Eigen::Index q = 0; q < nodes.size(); ++q) acc += weights(q) * f(nodes(q));
    return acc;
  }
};

/// Clenshaw-Curtis rule with nodes center - eps cos(pi q / Q), q = 0..Q, on [center-eps, center+eps].
/// Weights from the direct cosine sum.
inline QuadratureRule clenshaw_curtis(int q_order, double center, double epsilon) {
  if (q_order < 2) throw ConfigError("Q", "Clenshaw-Curtis order must be >= 2");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon", "interval half-width must be positive");
  const int nq = q_order;
  QuadratureRule rule;
  rule.order = nq;
  rule.nodes.resize(nq + 1);
  rule.weights.resize(nq + 1);
  const double pi = std::numbers::pi;
  for (int q = 0; q <= nq; ++q) {
    const double theta = pi * q / nq;
    double s = 0.0;
    for (int j = 1; j <= nq / 2; ++j) {
      const double b = (2 * j == nq) ? 1.0 : 2.0;
      s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
    }
    const double c = (q == 0 || q == nq) ? 1.0 : 2.0;
    rule.weights(q) = epsilon * c / nq * (1.0 - s);
    rule.nodes(q) = center - epsilon * std::cos(theta);
  }
  return rule;
}

}  // namespace deltafilter
