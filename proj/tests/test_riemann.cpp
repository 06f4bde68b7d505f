#include <cmath>

#include <gtest/gtest.h>

#include "fractal_zeta/riemann.hpp"

using namespace fzeta;

TEST(Riemann, ClassicalValues) {
  EXPECT_NEAR(riemann_reference(2.0).value.real(), kPi * kPi / 6.0, 1e-13);
  EXPECT_NEAR(riemann_reference(4.0).value.real(), std::pow(kPi, 4) / 90.0, 1e-13);
  const auto m1 = riemann_reference(-1.0);
  EXPECT_NEAR(m1.value.real(), -1.0 / 12.0, 1e-12);
  EXPECT_LE(std::abs(m1.value.real() + 1.0 / 12.0), m1.abs_error);
  EXPECT_NEAR(riemann_reference(0.0).value.real(), -0.5, 1e-13);
  EXPECT_NEAR(riemann_reference(0.5).value.real(), -1.4603545088095868, 1e-12);
}

TEST(Riemann, FirstZero) {
  const auto z = riemann_reference(cplx(0.5, 14.134725141734693));
  EXPECT_LT(std::abs(z.value), 1e-11);
}

TEST(Riemann, ErrorBoundReported) {
  for (double im : {0.0, 10.0, 30.0, 50.0}) {
    const auto z = riemann_reference(cplx(0.3, im));
    EXPECT_LE(z.abs_error, 1e-12);
    EXPECT_EQ(z.method, Method::euler_maclaurin);
  }
}

TEST(Riemann, Errors) {
  EXPECT_THROW(riemann_reference(1.0), PoleError);
  EXPECT_THROW(riemann_reference(-2.5), DomainError);
}
