#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "deltafilter/filter.hpp"
#include "deltafilter/io.hpp"

using namespace deltafilter;

namespace {

FilterMatrix make_filter(int n, KernelSpec spec, double nd) {
  return build_filter_matrix(SpectralGrid(n), build_kernel(spec), scaling_parameter(n, nd));
}

}  // namespace

TEST(ScalingParameter, GridRule) {
  EXPECT_NEAR(scaling_parameter(64, 13.0), std::sin(13.0 * std::numbers::pi / 128.0), 1e-15);
  EXPECT_NEAR(scaling_parameter(64, 13.0), 0.31368, 5e-6);
  EXPECT_NEAR(scaling_parameter(128, 2.5), 0.03068, 1e-5);
  EXPECT_LT(scaling_parameter(128, 1e-9), 1e-10);
  EXPECT_THROW(scaling_parameter(64, 64.0), ConfigError);
  EXPECT_THROW(scaling_parameter(64, 0.0), ConfigError);
  EXPECT_THROW(scaling_parameter(64, -1.0), ConfigError);
}

TEST(ScalingParameter, TheoreticalRule) {
  EXPECT_NEAR(theoretical_scaling_parameter(128, {3, 8}), std::pow(128.0, -8.0 / 13.0), 1e-15);
  EXPECT_NEAR(theoretical_scaling_parameter(64, {3, 8}, 2.0), 2.0 * std::pow(64.0, -8.0 / 13.0), 1e-15);
}

TEST(FilterMatrix, RowSumsAndIdentityRows) {
  for (double nd : {2.5, 13.0}) {
    const SpectralGrid grid(128);
    const FilterMatrix f = build_filter_matrix(grid, build_kernel({3, 8}), scaling_parameter(128, nd));
    ASSERT_EQ(f.size(), 129);
    EXPECT_EQ(f.order(), 128);
    for (int j = 0; j <= 128; ++j) {
      EXPECT_EQ(f.is_interior(j), std::abs(grid.node(j)) <= 1.0 - f.epsilon());
      if (f.is_interior(j)) {
        EXPECT_NEAR(f.matrix().row(j).sum(), 1.0, 1e-10) << "row " << j;
      } else {
        for (int i = 0; i <= 128; ++i) EXPECT_EQ(f.matrix()(j, i), i == j ? 1.0 : 0.0);
      }
    }
    EXPECT_FALSE(f.is_interior(0));
    EXPECT_TRUE(f.is_interior(64));
  }
}

TEST(FilterMatrix, ReproducesLowOrderPolynomials) {
  for (KernelSpec spec : {KernelSpec{3, 8}, KernelSpec{5, 8}, KernelSpec{1, 2}}) {
    for (double nd : {2.5, 13.0}) {
      const SpectralGrid grid(128);
      const FilterMatrix f = build_filter_matrix(grid, build_kernel(spec), scaling_parameter(128, nd));
      for (int p = 0; p <= spec.m; ++p) {
        const Eigen::VectorXd u = grid.nodes().array().pow(p);
        const Eigen::VectorXd su = apply_1d(f, u);
        for (int j = 0; j <= 128; ++j) {
          if (f.is_interior(j)) EXPECT_NEAR(su(j), u(j), 1e-9) << "m=" << spec.m << " p=" << p << " j=" << j;
        }
      }
    }
  }
}

TEST(FilterMatrix, DoesNotReproduceBeyondMoments) {
  // A degree m+1 monomial is shifted by the first non-vanishing moment.
  const SpectralGrid grid(64);
  const FilterMatrix f = build_filter_matrix(grid, build_kernel({1, 2}), 0.3);
  const Eigen::VectorXd u = grid.nodes().array().square();
  const double expected_shift = f.epsilon() * f.epsilon() * build_kernel({1, 2}).moment(2);
  EXPECT_NEAR(apply_1d(f, u)(32) - u(32), expected_shift, 1e-12);
  EXPECT_GT(std::abs(expected_shift), 1e-3);
}

TEST(FilterMatrix, MatchesDirectIntegrationOracle) {
  // Independent route: fine midpoint integration of the interpolant against the scaled kernel.
  const SpectralGrid grid(16);
  const DeltaKernel kernel = build_kernel({3, 2});
  const double eps = 0.4;
  const FilterMatrix f = build_filter_matrix(grid, kernel, eps);
  const ScaledKernel scaled(kernel, eps);
  Eigen::VectorXd u(17);
  for (int i = 0; i <= 16; ++i) u(i) = std::sin(3.0 * grid.node(i)) + grid.node(i);
  const Eigen::VectorXd su = apply_1d(f, u);
  for (int j = 0; j <= 16; ++j) {
    if (!f.is_interior(j)) continue;
    const int samples = 20000;
    const double h = 2.0 * eps / samples;
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double tau = grid.node(j) - eps + (s + 0.5) * h;
      acc += interpolate(grid, u, tau) * scaled(grid.node(j) - tau);
    }
    EXPECT_NEAR(su(j), acc * h, 1e-8) << "row " << j;
  }
}

TEST(FilterMatrix, RejectsBadEpsilon) {
  const SpectralGrid grid(16);
  const DeltaKernel kernel = build_kernel({3, 8});
  EXPECT_THROW(build_filter_matrix(grid, kernel, 0.0), ConfigError);
  EXPECT_THROW(build_filter_matrix(grid, kernel, 1.0), ConfigError);
}

TEST(FilterMatrix, Centrosymmetric) {
  const FilterMatrix f = make_filter(64, {3, 8}, 6.5);
  for (int j = 0; j <= 64; ++j)
    for (int i = 0; i <= 64; ++i) EXPECT_EQ(f.matrix()(64 - j, 64 - i), f.matrix()(j, i));
}

TEST(FilterMatrix, BitwiseDeterministic) {
  const FilterMatrix a = make_filter(96, {5, 8}, 6.5);
  const FilterMatrix b = make_filter(96, {5, 8}, 6.5);
  EXPECT_TRUE((a.matrix().array() == b.matrix().array()).all());
}

TEST(FilterMatrix, Locality) {
  // Each column integrates a global Lagrange polynomial, so entries outside the kernel
  // support are not zero; they are small next to the in-support weights.
  for (double nd : {2.5, 13.0}) {
    const SpectralGrid grid(128);
    const FilterMatrix f = make_filter(128, {3, 8}, nd);
    double near = 0.0, far = 0.0;
    for (int j = 0; j <= 128; ++j) {
      if (!f.is_interior(j)) continue;
      for (int i = 0; i <= 128; ++i) {
        const double h = (i > 0 ? grid.node(i) - grid.node(i - 1) : 0.0) + (i < 128 ? grid.node(i + 1) - grid.node(i) : 0.0);
        const double v = std::abs(f.matrix()(j, i));
        if (std::abs(grid.node(j) - grid.node(i)) > f.epsilon() + h) far = std::max(far, v);
        else near = std::max(near, v);
      }
    }
    EXPECT_LT(far, 0.05 * near) << "Nd=" << nd;
  }
  // Identity rows ignore every other node.
  const FilterMatrix f = make_filter(128, {3, 8}, 13.0);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(129);
  e(64) = 1.0;
  const Eigen::VectorXd response = apply_1d(f, e);
  for (int j = 0; j <= 128; ++j) {
    if (!f.is_interior(j)) EXPECT_EQ(response(j), 0.0);
  }
}

TEST(FilterMatrix, RepeatedFilteringGrowthBounded) {
  const SpectralGrid grid(128);
  const FilterMatrix f = make_filter(128, {3, 8}, 13.0);
  Eigen::VectorXd u(129);
  for (int i = 0; i <= 128; ++i) u(i) = std::exp(-4.0 * grid.node(i) * grid.node(i)) * std::cos(5.0 * grid.node(i));
  const Eigen::VectorXd su = apply_1d(f, u);
  const Eigen::VectorXd ssu = apply_1d(f, su);
  const double once = (su - u).cwiseAbs().maxCoeff();
  const double twice = (ssu - su).cwiseAbs().maxCoeff();
  EXPECT_GT(once, 0.0);
  EXPECT_LE(twice, 2.0 * once);
}

TEST(Apply, OneDimensional) {
  const FilterMatrix f = make_filter(64, {3, 8}, 6.5);
  EXPECT_EQ(apply_1d(f, Eigen::VectorXd::Zero(65)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((apply_1d(f, Eigen::VectorXd::Ones(65)).array() - 1.0).abs().maxCoeff(), 1e-10);
  EXPECT_THROW(apply_1d(f, Eigen::VectorXd::Ones(64)), std::invalid_argument);
  EXPECT_THROW(apply_columns(f, Eigen::MatrixXd::Ones(64, 3)), std::invalid_argument);
  const Eigen::MatrixXd block = Eigen::MatrixXd::Random(65, 3);
  const Eigen::MatrixXd fb = apply_columns(f, block);
  for (int c = 0; c < 3; ++c) EXPECT_LT((fb.col(c) - apply_1d(f, block.col(c))).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Apply, TwoDimensional) {
  const SpectralGrid gx(32), gy(48);
  const DeltaKernel kernel = build_kernel({3, 8});
  const FilterMatrix sx = build_filter_matrix(gx, kernel, scaling_parameter(32, 2.5));
  const FilterMatrix sy = build_filter_matrix(gy, kernel, scaling_parameter(48, 2.5));

  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(33, 49);
  EXPECT_LT((apply_2d(sx, sy, ones).array() - 1.0).abs().maxCoeff(), 1e-10);

  Eigen::VectorXd fx(33), gyv(49);
  for (int i = 0; i <= 32; ++i) fx(i) = std::sin(2.0 * gx.node(i));
  for (int j = 0; j <= 48; ++j) gyv(j) = std::exp(gy.node(j));
  const Eigen::MatrixXd rank1 = fx * gyv.transpose();
  const Eigen::MatrixXd expected = apply_1d(sx, fx) * apply_1d(sy, gyv).transpose();
  EXPECT_LT((apply_2d(sx, sy, rank1) - expected).cwiseAbs().maxCoeff(), 1e-12);

  EXPECT_THROW(apply_2d(sx, sy, Eigen::MatrixXd::Ones(49, 33)), std::invalid_argument);

  Eigen::MatrixXd sym(33, 33);
  for (int i = 0; i <= 32; ++i)
    for (int j = 0; j <= 32; ++j) sym(i, j) = std::cos(gx.node(i) * gx.node(j)) + gx.node(i) + gx.node(j);
  const Eigen::MatrixXd out = apply_2d(sx, sx, sym);
  EXPECT_LT((out - out.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ErrorIndicator, Properties) {
  const SpectralGrid grid(128);
  const FilterMatrix f = make_filter(128, {3, 8}, 13.0);
  EXPECT_LT(filter_error_indicator(f, Eigen::VectorXd::Constant(129, 3.0)).maxCoeff(), 1e-10);

  const double jump = 0.1;
  Eigen::VectorXd step(129);
  for (int i = 0; i <= 128; ++i) step(i) = grid.node(i) < jump ? 1.0 : 0.0;
  const Eigen::VectorXd e = filter_error_indicator(f, step);
  for (int j = 0; j <= 128; ++j) {
    if (!f.is_interior(j)) EXPECT_EQ(e(j), 0.0);
  }
  Eigen::Index peak = 0;
  e.maxCoeff(&peak);
  EXPECT_LE(std::abs(grid.node(static_cast<int>(peak)) - jump), f.epsilon());
}

TEST(Apply, StepFunctionFarField) {
  // The filter convolves the global interpolant, whose Gibbs tail between nodes never
  // vanishes, so far-field nodes move by a small N-independent amount (~3e-6), not by roundoff.
  for (int n : {64, 128, 256}) {
    const SpectralGrid grid(n);
    const FilterMatrix f = make_filter(n, {3, 8}, 13.0);
    Eigen::VectorXd step(n + 1);
    for (int i = 0; i <= n; ++i) step(i) = grid.node(i) < 0.0 ? 1.0 : 0.0;
    const Eigen::VectorXd su = apply_1d(f, step);
    double far = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (std::abs(grid.node(j)) > f.epsilon()) far = std::max(far, std::abs(su(j) - step(j)));
    }
    EXPECT_LT(far, 1e-5) << "N=" << n;
    // Inside the support the smoothing is O(1).
    EXPECT_GT(std::abs(su(n / 2) - step(n / 2)), 0.1);
  }
}

TEST(FilterMatrix, JsonDump) {
  const FilterMatrix f = make_filter(8, {1, 0}, 2.0);
  const auto j = filter_to_json(f, 2.0);
  EXPECT_EQ(j.at("N"), 8);
  EXPECT_EQ(j.at("Nd"), 2.0);
  EXPECT_EQ(j.at("S").size(), 81u);
  EXPECT_EQ(j.at("S")[4 * 9 + 3].get<double>(), f.matrix()(4, 3));
}
