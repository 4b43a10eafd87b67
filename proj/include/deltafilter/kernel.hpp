#pragma once

// Compactly supported polynomial approximations of the Dirac delta.
//
// P^{m,k}(xi) on [-1, 1] is the polynomial of degree M = m + 2(k+1) with
//   P^(i)(+-1) = 0             for i = 0..k
//   int_{-1}^{1} P        = 1
//   int_{-1}^{1} xi^i P   = 0  for i = 1..m
// and the scaled kernel is (1/eps) P(x/eps) on [-eps, eps], zero outside.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "deltafilter/errors.hpp"

namespace deltafilter {

struct KernelSpec {
  int m = 3;  ///< vanishing moments
  int k = 8;  ///< endpoint smoothness (value and first k derivatives vanish)

  int degree() const noexcept { return m + 2 * (k + 1); }

  void validate() const {
    if (m < 1) throw ConfigError("m", "number of vanishing moments must be >= 1");
    if (k < 0) throw ConfigError("k", "smoothness order must be >= 0");
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

namespace detail {

using Rational = boost::multiprecision::cpp_rational;

// i-th derivative of xi^n evaluated at +1 / -1, as a falling factorial.
inline Rational monomial_derivative_at(int n, int i, int sign) {
  if (i > n) return 0;
  boost::multiprecision::cpp_int f = 1;
  for (int r = 0; r < i; ++r) f *= n - r;
  if (sign < 0 && ((n - i) % 2 != 0)) f = -f;
  return Rational(f);
}

// int_{-1}^{1} xi^p dxi
inline Rational monomial_integral(int p) { return (p % 2 == 0) ? Rational(2, p + 1) : Rational(0); }

// Unnormalised double-double value hi + lo, used where cancellation between large terms
// would otherwise swamp the checks (high-order derivatives reach ~1e13 term magnitudes).
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
  }
  friend DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return two_sum(s.hi, s.lo);
  }
  friend DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    const double p = a.hi * b.hi;
    const double e = std::fma(a.hi, b.hi, -p) + (a.hi * b.lo + a.lo * b.hi);
    return two_sum(p, e);
  }
  static DoubleDouble quotient(double a, double b) {
    const double q = a / b;
    const double r = std::fma(-q, b, a);
    return two_sum(q, r / b);
  }
  double value() const noexcept { return hi + lo; }
};

}  // namespace detail

class DeltaKernel {
public:
  /// Tolerance of the post-construction checks on moments and endpoint derivatives.
  static constexpr double kVerifyTolerance = 1e-10;

  DeltaKernel() = default;

  /// Solves the (M+1)x(M+1) monomial system for P^{m,k} in exact rational arithmetic and rounds
  /// each coefficient to the nearest double.
  /// Throws KernelConstructionError if the system is singular or the result fails verification.
  static DeltaKernel build(const KernelSpec& spec) {
    spec.validate();
    using detail::Rational;
    const int n = spec.degree() + 1;

    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, Rational(0)));
    int row = 0;
    for (int i = 0; i <= spec.k; ++i) {
      for (int sign : {+1, -1}) {
        for (int c = 0; c < n; ++c) a[row][c] = detail::monomial_derivative_at(c, i, sign);
        ++row;
      }
    }
    for (int i = 0; i <= spec.m; ++i) {
      for (int c = 0; c < n; ++c) a[row][c] = detail::monomial_integral(c + i);
      a[row][n] = (i == 0) ? 1 : 0;
      ++row;
    }

    for (int col = 0; col < n; ++col) {
      int pivot = col;
      while (pivot < n && a[pivot][col] == 0) ++pivot;
      if (pivot == n) {
        throw KernelConstructionError("singular kernel system for (m,k)=(" + std::to_string(spec.m) + "," +
                                      std::to_string(spec.k) + ")");
      }
      std::swap(a[col], a[pivot]);
      for (int r = 0; r < n; ++r) {
        if (r == col || a[r][col] == 0) continue;
        const Rational f = a[r][col] / a[col][col];
        for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
      }
    }

    using Wide = boost::multiprecision::cpp_bin_float_100;
    DeltaKernel kernel;
    kernel.spec_ = spec;
    kernel.coeffs_.resize(n);
    for (int c = 0; c < n; ++c) {
      const Rational x = a[c][n] / a[c][c];
      kernel.coeffs_[c] = static_cast<double>(Wide(numerator(x)) / Wide(denominator(x)));
    }
    kernel.verify();
    return kernel;
  }

  const KernelSpec& spec() const noexcept { return spec_; }
  int degree() const noexcept { return spec_.degree(); }

  /// Monomial coefficients c_0..c_M.
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  /// P(xi) by Horner's rule. No support truncation.
  double operator()(double xi) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * xi + *it;
    return acc;
  }

  /// order-th derivative of P at xi via exact coefficient differentiation, evaluated in
  /// double-double arithmetic.
  double derivative(int order, double xi) const {
    using detail::DoubleDouble;
    std::vector<DoubleDouble> c;
    for (double v : coeffs_) c.push_back({v, 0.0});
    for (int d = 0; d < order; ++d) {
      if (c.size() <= 1) return 0.0;
      for (std::size_t p = 1; p < c.size(); ++p) c[p - 1] = c[p] * DoubleDouble{static_cast<double>(p), 0.0};
      c.pop_back();
    }
    DoubleDouble acc;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * DoubleDouble{xi, 0.0} + *it;
    return acc.value();
  }

  /// int_{-1}^{1} xi^i P(xi) dxi from the exact antiderivative of each term.
  double moment(int i) const {
    using detail::DoubleDouble;
    DoubleDouble acc;
    for (std::size_t p = 0; p < coeffs_.size(); ++p) {
      const int q = static_cast<int>(p) + i;
      if (q % 2 != 0) continue;
      acc = acc + DoubleDouble{coeffs_[p], 0.0} * DoubleDouble::quotient(2.0, q + 1.0);
    }
    return acc.value();
  }

  /// True when all odd coefficients vanish to kVerifyTolerance.
  bool is_even() const noexcept {
    for (std::size_t p = 1; p < coeffs_.size(); p += 2) {
      if (std::abs(coeffs_[p]) > kVerifyTolerance) return false;
    }
    return true;
  }

private:
  void verify() const {
    auto fail = [&](const std::string& what, double residual) {
      throw KernelConstructionError("kernel (m,k)=(" + std::to_string(spec_.m) + "," +
                                    std::to_string(spec_.k) + ") failed " + what +
                                    " check, residual " + std::to_string(residual));
    };
    if (double r = std::abs(moment(0) - 1.0); !(r <= kVerifyTolerance)) fail("unit mass", r);
    for (int i = 1; i <= spec_.m; ++i) {
      if (double r = std::abs(moment(i)); !(r <= kVerifyTolerance)) fail("moment " + std::to_string(i), r);
    }
    for (int i = 0; i <= spec_.k; ++i) {
      for (double end : {-1.0, 1.0}) {
        if (double r = std::abs(derivative(i, end)); !(r <= kVerifyTolerance)) {
          fail("endpoint derivative " + std::to_string(i), r);
        }
      }
    }
  }

  KernelSpec spec_{};
  std::vector<double> coeffs_;
};

inline DeltaKernel build_kernel(const KernelSpec& spec) { return DeltaKernel::build(spec); }

/// delta_eps(x) = (1/eps) P(x/eps) on |x| <= eps.
class ScaledKernel {
public:
  ScaledKernel(DeltaKernel kernel, double epsilon) : kernel_(std::move(kernel)), epsilon_(epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon", "kernel support half-width must be positive");
  }

  const DeltaKernel& kernel() const noexcept { return kernel_; }
  double epsilon() const noexcept { return epsilon_; }

  double operator()(double x) const noexcept {
    if (std::abs(x) > epsilon_) return 0.0;
    return kernel_(x / epsilon_) / epsilon_;
  }

private:
  DeltaKernel kernel_;
  double epsilon_;
};

inline double eval_scaled(const ScaledKernel& kernel, double x) noexcept { return kernel(x); }

/// Tensor-product kernel delta(x) * delta(y).
inline double eval_scaled_2d(const ScaledKernel& kx, const ScaledKernel& ky, double dx,
                             double dy) noexcept {
  return kx(dx) * ky(dy);
}

}  // namespace deltafilter
