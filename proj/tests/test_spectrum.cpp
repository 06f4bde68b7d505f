#include <cmath>

#include <gtest/gtest.h>

#include "fractal_zeta/spectrum.hpp"

using namespace fzeta;

namespace {
const BranchSystem& quad() {
  static const BranchSystem bs = build_branch_system(RealPolynomial{0.0, 4.0, -2.0});
  return bs;
}
const BranchSystem& gasket() {
  static const BranchSystem bs = build_branch_system(RealPolynomial{0.0, 5.0, -4.0});
  return bs;
}
}  // namespace

TEST(Enumerate, QuadraticBelowHundred) {
  const auto sl = enumerate(quad(), 0.0, 100.0);
  ASSERT_EQ(sl.atoms.size(), 2u);
  EXPECT_NEAR(sl.atoms[0].lambda, 2.0 * kPi * kPi, 1e-9);
  EXPECT_EQ(sl.atoms[0].multiplicity, 2);
  EXPECT_NEAR(sl.atoms[1].lambda, 8.0 * kPi * kPi, 1e-8);
  EXPECT_EQ(sl.atoms[1].multiplicity, 2);
  EXPECT_EQ(sl.atoms[0].word.to_string(), "2");
  EXPECT_EQ(sl.atoms[1].word.to_string(), "2.1");
  EXPECT_EQ(sl.total_multiplicity(), 4);
}

TEST(Enumerate, EmptyBelowSmallestAtom) { EXPECT_TRUE(enumerate(quad(), 0.0, 10.0).atoms.empty()); }

TEST(Enumerate, ZeroGeneratorDropsDepthZero) {
  for (const auto& a : enumerate(quad(), 0.0, 1e3).atoms) EXPECT_GE(a.depth, 1);
}

TEST(Enumerate, QuadraticIsSquares) {
  // {2 pi^2 j^2 : j >= 1}, each twice
  const auto sl = enumerate(quad(), 0.0, 1e5);
  int j = 1;
  for (const auto& a : sl.atoms) {
    EXPECT_NEAR(a.lambda / (2.0 * kPi * kPi * j * j), 1.0, 1e-7) << "j=" << j;
    EXPECT_EQ(a.multiplicity, 2);
    ++j;
  }
  EXPECT_EQ(j - 1, static_cast<int>(std::floor(std::sqrt(1e5 / (2.0 * kPi * kPi)))));
}

TEST(Enumerate, AtomsMatchLinearizer) {
  const auto sl = enumerate(gasket(), 0.75, 5e3);
  for (const auto& a : sl.atoms) {
    const double z = inverse_orbit(gasket(), a.word, 0.75);
    EXPECT_NEAR(a.lambda, std::pow(5.0, a.depth) * fatou(gasket(), z, 1e-13), 1e-9 * a.lambda);
    EXPECT_TRUE(a.word.is_plus());
  }
}

TEST(Enumerate, CompleteAgainstBruteForce) {
  const double cutoff = 3e3;
  const auto sl = enumerate(gasket(), 0.75, cutoff);
  // every word to a depth past the stopping depth
  std::vector<double> all;
  std::vector<double> level{0.75};
  for (int m = 0; m <= 8; ++m) {
    const std::size_t plus_start = m == 0 ? 0 : level.size() / 2;
    for (std::size_t i = plus_start; i < level.size(); ++i) {
      const double l = std::pow(5.0, m) * fatou(gasket(), level[i], 1e-13);
      if (l > 0.0 && l <= cutoff) all.push_back(l);
    }
    level = preimage_level(gasket(), level);
  }
  std::sort(all.begin(), all.end());
  std::vector<double> flat;
  for (const auto& a : sl.atoms)
    for (long k = 0; k < a.multiplicity; ++k) flat.push_back(a.lambda);
  ASSERT_EQ(flat.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_NEAR(flat[i], all[i], 1e-8 * all[i]);
}

TEST(Enumerate, Errors) {
  EXPECT_THROW(enumerate(gasket(), 2.0, 10.0), DomainError);
  EXPECT_THROW(enumerate(gasket(), 0.75, -1.0), ArgumentError);
  EnumerateOptions tiny;
  tiny.node_budget = 8;
  try {
    enumerate(gasket(), 0.75, 1e9, tiny);
    FAIL();
  } catch (const ResourceError& e) {
    EXPECT_GT(e.reachable, 0.0);
    EXPECT_LT(e.reachable, 1e9);
  }
}

TEST(Counting, Examples) {
  const auto sl = enumerate(quad(), 0.0, 100.0);
  EXPECT_EQ(counting(sl, 20.0), 2);
  EXPECT_EQ(counting(sl, sl.atoms[0].lambda), 0);
  EXPECT_THROW(counting(sl, 101.0), CompletenessError);
}

TEST(Counting, GasketGrowth) {
  // rho(lambda) / lambda^{d_R/2} oscillates log-periodically; at 1e4 it is about 0.61
  const auto sl = enumerate(gasket(), 0.75, 1e6);
  EXPECT_EQ(counting(sl, 1e4), 32);
  for (double l : {1e3, 3e3, 1e4, 3e4, 1e5, 3e5, 1e6}) {
    const double ratio = static_cast<double>(counting(sl, l)) / std::pow(l, gasket().d_R / 2.0);
    EXPECT_GT(ratio, 0.5) << l;
    EXPECT_LT(ratio, 1.0) << l;
  }
}
