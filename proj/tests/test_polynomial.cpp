#include <cmath>

#include <gtest/gtest.h>

#include "fractal_zeta/numeric.hpp"
#include "fractal_zeta/polynomial.hpp"

using namespace fzeta;

TEST(RealPolynomial, TrimsAndEvaluates) {
  const RealPolynomial p{0.0, 4.0, -2.0, 0.0, 0.0};
  EXPECT_EQ(p.degree(), 2);
  EXPECT_DOUBLE_EQ(p(1.0), 2.0);
  EXPECT_DOUBLE_EQ(p(2.0), 0.0);
  const auto [v, d] = p.value_and_derivative(0.5);
  EXPECT_DOUBLE_EQ(v, 1.5);
  EXPECT_DOUBLE_EQ(d, 2.0);
  EXPECT_EQ(p.derivative(), (RealPolynomial{4.0, -4.0}));
  EXPECT_DOUBLE_EQ(p.coeff(7), 0.0);
}

TEST(RealPolynomial, RootsOfQuadraticAndCubic) {
  const auto r = real_roots(RealPolynomial{0.0, 5.0, -4.0});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 0.0, 1e-15);
  EXPECT_NEAR(r[1], 1.25, 1e-15);
  // z(2z-3)^2: double root at 3/2
  const auto c = real_roots(RealPolynomial{0.0, 9.0, -12.0, 4.0});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[1], 1.5, 1e-7);
}

TEST(RealPolynomial, RootsInWindow) {
  const RealPolynomial p{-2.0, 0.0, 1.0};
  const auto r = real_roots(p, 0.0, 10.0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], std::sqrt(2.0), 1e-15);
  EXPECT_GE(cauchy_root_bound(p), std::sqrt(2.0));
}

TEST(RealPolynomial, SeriesMultiplyTruncates) {
  const std::vector<double> a{1.0, 1.0}, b{1.0, -1.0, 1.0};
  const auto c = series_multiply(a, b, 3);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[1], 0.0);
  EXPECT_DOUBLE_EQ(c[2], 0.0);
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-17);
  s.add(-1.0);
  // 1000 * 1e-17 is not exactly 1e-14 in binary; the naive sum would return 0
  EXPECT_NEAR(s.value(), 1e-14, 1e-25);
}
