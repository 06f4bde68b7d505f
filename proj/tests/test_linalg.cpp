#include <cmath>

#include <gtest/gtest.h>

#include "fractal_zeta/linalg.hpp"
#include "fractal_zeta/numeric.hpp"

using namespace fzeta;

TEST(Jacobi, IdentityClusters) {
  DenseMatrix I(5);
  for (std::size_t i = 0; i < 5; ++i) I(i, i) = 1.0;
  const auto c = cluster_values(jacobi_eigen(I, false).values, 1e-7);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c[0].value, 1.0);
  EXPECT_EQ(c[0].multiplicity, 5);
}

TEST(Jacobi, ChainSpectrum) {
  // path Laplacian I - P (symmetrized) on 5 points: 1 - cos(k pi / 4)
  DenseMatrix A(5);
  const double e = std::sqrt(0.5);
  for (std::size_t i = 0; i < 5; ++i) A(i, i) = 1.0;
  A(0, 1) = A(1, 0) = -e;
  A(3, 4) = A(4, 3) = -e;
  A(1, 2) = A(2, 1) = A(2, 3) = A(3, 2) = -0.5;
  const auto ev = jacobi_eigen(A, true);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(ev.values[static_cast<std::size_t>(k)], 1.0 - std::cos(k * kPi / 4.0), 1e-13);
  // A v = lambda v
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t i = 0; i < 5; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < 5; ++j) s += A(i, j) * ev.vectors(j, k);
      EXPECT_NEAR(s, ev.values[k] * ev.vectors(i, k), 1e-13);
    }
}

TEST(Jacobi, TracePreserved) {
  DenseMatrix A(4);
  const double v[4][4] = {{4, 1, 2, 0.5}, {1, 3, 0, 1}, {2, 0, 5, 2}, {0.5, 1, 2, 1}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) A(i, j) = v[i][j];
  const auto ev = jacobi_eigen(A, false);
  double s = 0.0;
  for (double x : ev.values) s += x;
  EXPECT_NEAR(s, A.trace(), 1e-13);
  EXPECT_DOUBLE_EQ(A.max_asymmetry(), 0.0);
}
