#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "bqcf/blending.hpp"
#include "bqcf/lattice2d.hpp"

using namespace bqcf;

TEST(Spline, EndpointsAndClamping) {
  for (auto kind : {SplineKind::cubic, SplineKind::quintic}) {
    EXPECT_EQ(spline_eval(kind, -0.5), 0.0);
    EXPECT_EQ(spline_eval(kind, 0.0), 0.0);
    EXPECT_EQ(spline_eval(kind, 1.0), 1.0);
    EXPECT_EQ(spline_eval(kind, 1.5), 1.0);
    EXPECT_DOUBLE_EQ(spline_eval(kind, 0.5), 0.5);
  }
}

TEST(Spline, PointSymmetry) {
  for (auto kind : {SplineKind::cubic, SplineKind::quintic}) {
    for (double x = 0.0; x <= 1.0; x += 0.0625) {
      EXPECT_NEAR(spline_eval(kind, x) + spline_eval(kind, 1.0 - x), 1.0, 1e-15);
    }
  }
}

TEST(Spline, VanishingDerivativesAtKnots) {
  for (double x : {0.0, 1.0}) {
    EXPECT_NEAR(spline_derivative(SplineKind::cubic, x, 1), 0.0, 1e-14);
    EXPECT_NEAR(spline_derivative(SplineKind::quintic, x, 1), 0.0, 1e-14);
    EXPECT_NEAR(spline_derivative(SplineKind::quintic, x, 2), 0.0, 1e-13);
  }
  EXPECT_NEAR(std::abs(spline_derivative(SplineKind::cubic, 0.0, 2)), 6.0, 1e-13);
  EXPECT_NEAR(spline_derivative(SplineKind::quintic, 0.0, 3), 60.0, 1e-12);
}

TEST(Spline, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  for (auto kind : {SplineKind::cubic, SplineKind::quintic}) {
    for (double x : {0.1, 0.3, 0.5, 0.77}) {
      EXPECT_NEAR(spline_derivative(kind, x, 1), (spline_eval(kind, x + h) - spline_eval(kind, x - h)) / (2 * h), 1e-8);
      for (int order = 2; order <= 3; ++order) {
        const double fd =
            (spline_derivative(kind, x + h, order - 1) - spline_derivative(kind, x - h, order - 1)) / (2 * h);
        EXPECT_NEAR(spline_derivative(kind, x, order), fd, 1e-6);
      }
    }
  }
}

TEST(Spline, ParseNames) {
  EXPECT_EQ(parse_spline_kind("cubic"), SplineKind::cubic);
  EXPECT_EQ(parse_spline_kind("quintic"), SplineKind::quintic);
  EXPECT_EQ(to_string(SplineKind::quintic), "quintic");
  EXPECT_THROW(parse_spline_kind("linear"), std::invalid_argument);
}

TEST(Profile1D, RegionsOfTheChain) {
  const int N = 40, K = 8;
  const auto p = BlendProfile1D::from_spline(SplineKind::quintic, K, N);
  ASSERT_EQ(p.size(), 2 * N);
  for (int l = -N + 1; l <= 0; ++l) EXPECT_EQ(p.at_site(l), 0.0);
  for (int l = 1; l < K; ++l) {
    EXPECT_GT(p.at_site(l), 0.0);
    EXPECT_LT(p.at_site(l), 1.0);
  }
  for (int l = K; l <= N; ++l) EXPECT_EQ(p.at_site(l), 1.0);
  EXPECT_EQ(p.nominal_width(), K);
  // blend sites 1..K-1 widened by two on each side
  EXPECT_EQ(p.support_width(), K - 1 + 4);
  EXPECT_THROW(BlendProfile1D::from_spline(SplineKind::cubic, 0, N), std::invalid_argument);
}

TEST(Profile1D, ConstantHasEmptySupport) {
  EXPECT_EQ(BlendProfile1D::constant(1.0, 10).support_width(), 0);
  EXPECT_EQ(BlendProfile1D::constant(0.0, 10).support_width(), 0);
}

// sup |D^j beta| (K eps)^j tends to max |B^(j)|
TEST(Profile1D, DerivativeSupNormScalingCollapse) {
  const int N = 4096;
  const double eps = 1.0 / N;
  struct Expect {
    SplineKind kind;
    double d1, d2;
  };
  for (const auto& e : {Expect{SplineKind::cubic, 1.5, 6.0}, Expect{SplineKind::quintic, 1.875, 10.0 / std::sqrt(3.0)}}) {
    for (int K : {64, 128}) {
      const auto s = derivative_sup_norms(BlendProfile1D::from_spline(e.kind, K, N), eps);
      const double h = K * eps;
      EXPECT_NEAR(s.d1 * h / e.d1, 1.0, 0.02) << K;
      EXPECT_NEAR(s.d2 * h * h / e.d2, 1.0, 0.05) << K;
    }
  }
  // quintic third differences converge at rate 1/K, cubic ones see the jump of B''
  for (int K : {64, 128}) {
    const double h = K * eps;
    const auto q = derivative_sup_norms(BlendProfile1D::from_spline(SplineKind::quintic, K, N), eps);
    EXPECT_NEAR(q.d3 * h * h * h / 60.0, 1.0, 12.0 / K) << K;
    const auto c = derivative_sup_norms(BlendProfile1D::from_spline(SplineKind::cubic, K, N), eps);
    EXPECT_NEAR(c.d3 * h * h * h / (3.0 * K), 1.0, 0.02) << K;
  }
}

TEST(HexRadius, AgreesWithLatticeNorm) {
  for (int i = -6; i <= 6; ++i) {
    for (int j = -6; j <= 6; ++j) {
      EXPECT_NEAR(hex_radius(lattice_position(i, j)), hex_norm(i, j), 1e-12);
    }
  }
}

TEST(Blend2D, RadialShape) {
  const auto b = Blend2D::radial(4.0, 8.0, SplineKind::quintic);
  EXPECT_EQ(b(Vec2(0.0, 0.0)), 1.0);
  EXPECT_EQ(b(Vec2(4.0, 0.0)), 1.0);
  EXPECT_NEAR(b(Vec2(0.0, 6.0)), 0.5, 1e-15);
  EXPECT_EQ(b(Vec2(8.0, 0.0)), 0.0);
  EXPECT_EQ(b(Vec2(-9.0, 3.0)), 0.0);
}

TEST(Blend2D, HexagonalShapeFollowsHexNorm) {
  const auto b = Blend2D::hexagonal(3.0, 7.0, SplineKind::cubic);
  for (int i = -8; i <= 8; ++i) {
    for (int j = -8; j <= 8; ++j) {
      const double expected = spline_eval(SplineKind::cubic, (7.0 - hex_norm(i, j)) / 4.0);
      EXPECT_NEAR(b(lattice_position(i, j)), expected, 1e-12);
    }
  }
}

TEST(Blend2D, IndicatorAndConstant) {
  const auto ind = Blend2D::indicator(3);
  EXPECT_EQ(ind.at_site(3, 0, lattice_position(3, 0)), 1.0);
  EXPECT_EQ(ind.at_site(-3, 3, lattice_position(-3, 3)), 1.0);
  EXPECT_EQ(ind.at_site(4, -1, lattice_position(4, -1)), 0.0);
  EXPECT_EQ(Blend2D::constant(0.25)(Vec2(100.0, 0.0)), 0.25);
  EXPECT_THROW(Blend2D::constant(1.5), std::invalid_argument);
  EXPECT_THROW(Blend2D::indicator(-1), std::invalid_argument);
}
