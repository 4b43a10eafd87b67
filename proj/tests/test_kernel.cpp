#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "deltafilter/io.hpp"
#include "deltafilter/kernel.hpp"

using namespace deltafilter;

namespace {

struct ClosedForm {
  int m;
  int k;
  std::vector<double> coeffs;  // ascending powers
};

// Closed forms of P^{1,0..2} and P^{3,0..2}, expanded to monomials.
const std::vector<ClosedForm>& closed_forms() {
  static const std::vector<ClosedForm> forms = {
      {1, 0, {3.0 / 4, 0, -3.0 / 4, 0}},
      {1, 1, {15.0 / 16, 0, -30.0 / 16, 0, 15.0 / 16, 0}},
      {1, 2, {35.0 / 32, 0, -105.0 / 32, 0, 105.0 / 32, 0, -35.0 / 32, 0}},
      {3, 0, {45.0 / 32, 0, -150.0 / 32, 0, 105.0 / 32, 0}},
      {3, 1, {105.0 / 64, 0, -525.0 / 64, 0, 735.0 / 64, 0, -315.0 / 64, 0}},
      {3, 2, {945.0 / 512, 0, -6300.0 / 512, 0, 13230.0 / 512, 0, -11340.0 / 512, 0, 3465.0 / 512, 0}},
  };
  return forms;
}

}  // namespace

TEST(Kernel, DegreeBound) {
  EXPECT_EQ((KernelSpec{1, 0}.degree()), 3);
  EXPECT_EQ((KernelSpec{3, 8}.degree()), 21);
  EXPECT_EQ((KernelSpec{5, 8}.degree()), 23);
}

TEST(Kernel, ReproducesClosedForms) {
  for (const auto& form : closed_forms()) {
    const DeltaKernel kernel = build_kernel({form.m, form.k});
    ASSERT_EQ(kernel.coeffs().size(), form.coeffs.size()) << form.m << "," << form.k;
    for (std::size_t p = 0; p < form.coeffs.size(); ++p) {
      EXPECT_NEAR(kernel.coeffs()[p], form.coeffs[p], 1e-12) << "(m,k)=(" << form.m << "," << form.k << ") c" << p;
    }
  }
}

TEST(Kernel, MatchesExactRationalSolveForPaperKernels) {
  // Constant terms from an exact rational solve of the same conditions.
  EXPECT_NEAR(build_kernel({3, 8}).coeffs()[0], 2.7751035690307617, 1e-12);
  EXPECT_NEAR(build_kernel({5, 8}).coeffs()[0], 3.6265558004379272, 1e-11);
  EXPECT_NEAR(build_kernel({3, 8}).coeffs()[10], -3030.413097381592, 1e-9);
}

TEST(Kernel, MomentsAndEndpointsForAllSmallSpecs) {
  for (int m = 1; m <= 7; ++m) {
    for (int k = 0; k <= 10; ++k) {
      const DeltaKernel kernel = build_kernel({m, k});
      EXPECT_NEAR(kernel.moment(0), 1.0, 1e-12) << m << "," << k;
      for (int i = 1; i <= m; ++i) EXPECT_NEAR(kernel.moment(i), 0.0, 1e-10) << m << "," << k << " moment " << i;
      for (int i = 0; i <= k; ++i) {
        EXPECT_NEAR(kernel.derivative(i, 1.0), 0.0, 1e-10) << m << "," << k << " d" << i;
        EXPECT_NEAR(kernel.derivative(i, -1.0), 0.0, 1e-10) << m << "," << k << " d" << i;
      }
    }
  }
}

TEST(Kernel, OddMomentCountGivesEvenPolynomial) {
  for (int m : {1, 3, 5, 7}) {
    for (int k : {0, 2, 8}) {
      const DeltaKernel kernel = build_kernel({m, k});
      EXPECT_TRUE(kernel.is_even());
      for (std::size_t p = 1; p < kernel.coeffs().size(); p += 2) EXPECT_NEAR(kernel.coeffs()[p], 0.0, 1e-12);
      for (double xi : {0.1, 0.37, 0.9}) EXPECT_NEAR(kernel(xi), kernel(-xi), 1e-12);
    }
  }
}

TEST(Kernel, FirstMomentIsNotDesignedAway) {
  // m vanishing moments, not m+1: for m = 1 the second moment is generically nonzero.
  EXPECT_GT(std::abs(build_kernel({1, 0}).moment(2)), 1e-3);
}

TEST(Kernel, InvalidSpecsRejected) {
  EXPECT_THROW(build_kernel({0, 2}), ConfigError);
  EXPECT_THROW(build_kernel({3, -1}), ConfigError);
}

TEST(ScaledKernel, EvaluationAndSupport) {
  const DeltaKernel p10 = build_kernel({1, 0});
  EXPECT_DOUBLE_EQ(eval_scaled(ScaledKernel(p10, 1.0), 0.0), 0.75);
  EXPECT_DOUBLE_EQ(eval_scaled(ScaledKernel(p10, 0.5), 0.0), 1.5);
  const ScaledKernel wide(build_kernel({3, 8}), 0.3);
  EXPECT_EQ(eval_scaled(wide, 0.6), 0.0);
  EXPECT_EQ(eval_scaled(wide, -0.6), 0.0);
  EXPECT_EQ(eval_scaled(wide, 0.3000001), 0.0);
  EXPECT_THROW(ScaledKernel(p10, 0.0), ConfigError);
}

TEST(ScaledKernel, UnitMassForAnyWidth) {
  // Midpoint sum on a fine grid: the scaled kernel integrates to one over [-eps, eps].
  for (double eps : {0.05, 0.3, 1.0}) {
    const ScaledKernel kernel(build_kernel({5, 8}), eps);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += kernel(-eps + (i + 0.5) * 2.0 * eps / n);
    EXPECT_NEAR(sum * 2.0 * eps / n, 1.0, 1e-9);
  }
}

TEST(ScaledKernel, TensorProduct) {
  const ScaledKernel k10(build_kernel({1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(eval_scaled_2d(k10, k10, 0.0, 0.0), 0.5625);
  EXPECT_EQ(eval_scaled_2d(k10, k10, 2.0, 0.0), 0.0);
  const ScaledKernel k38(build_kernel({3, 8}), 0.4);
  EXPECT_DOUBLE_EQ(eval_scaled_2d(k38, k38, 0.1, -0.27), eval_scaled_2d(k38, k38, -0.27, 0.1));
}

TEST(Kernel, JsonExport) {
  const auto j = kernel_to_json(build_kernel({3, 8}));
  EXPECT_EQ(j.at("m"), 3);
  EXPECT_EQ(j.at("k"), 8);
  EXPECT_EQ(j.at("degree"), 21);
  EXPECT_EQ(j.at("coeffs").size(), 22u);
  const DeltaKernel back = kernel_from_json(j);
  EXPECT_EQ(back.spec(), (KernelSpec{3, 8}));
}
