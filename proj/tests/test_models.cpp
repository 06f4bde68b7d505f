#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fractal_zeta/models.hpp"

using namespace fzeta;

namespace {

ModelEvaluator& sg() {
  static ModelEvaluator e(make_model("sierpinski_gasket"));
  return e;
}

}  // namespace

TEST(MakeModel, Quadratic) {
  const auto m = make_model("interval_quadratic");
  EXPECT_EQ(m.family, Family::interval_quadratic);
  EXPECT_EQ(*m.poly, (RealPolynomial{0.0, 4.0, -2.0}));
  ASSERT_EQ(m.generators.size(), 1u);
  EXPECT_DOUBLE_EQ(m.generators[0].z0, 0.0);
  EXPECT_DOUBLE_EQ(m.constants.at("C"), std::sqrt(2.0) * kPi);
  EXPECT_DOUBLE_EQ(m.c_renorm, 4.0);
  EXPECT_EQ(make_model("interval_uniform").family, Family::interval_quadratic);
}

TEST(MakeModel, Gasket) {
  const auto m = make_model("sg");
  EXPECT_EQ(*m.poly, (RealPolynomial{0.0, 5.0, -4.0}));
  ASSERT_EQ(m.generators.size(), 2u);
  EXPECT_DOUBLE_EQ(m.generators[0].z0, 0.75);
  EXPECT_DOUBLE_EQ(m.generators[1].z0, 1.25);
  EXPECT_DOUBLE_EQ(m.c_renorm, 5.0);
  EXPECT_NEAR(m.constants.at("d_s"), std::log(9.0) / std::log(5.0), 1e-15);
}

TEST(MakeModel, Weighted) {
  const auto m = make_model("interval_weighted", with_p(0.3));
  EXPECT_NEAR(m.c_renorm, 1.0 + 2.0 / 0.21, 1e-12);
  EXPECT_NEAR(m.generators[0].z0, 0.3, 1e-15);
  EXPECT_NEAR(m.generators[1].z0, 1.7, 1e-15);
  EXPECT_NEAR(m.constants.at("d_s"), std::log(9.0) / std::log(1.0 + 2.0 / 0.21), 1e-14);
  EXPECT_NEAR(m.constants.at("eigen_scale_fit"), 1.0, 2e-3);
}

TEST(MakeModel, Errors) {
  EXPECT_THROW(make_model("torus"), ArgumentError);
  EXPECT_THROW(make_model("interval_weighted", with_p(0.0)), ArgumentError);
  EXPECT_THROW(make_model("interval_weighted", with_p(1.2)), ArgumentError);
  ModelParams bad;
  bad.string = StringSpec::geometric(1.0, 0.5, 2);
  EXPECT_THROW(make_model("fractal_string", bad), ArgumentError);
}

TEST(MakeModel, WeightedPolynomialSymmetry) {
  for (double p : {0.2, 0.3, 0.45}) {
    const auto ma = make_model("interval_weighted", with_p(p)), mb = make_model("interval_weighted", with_p(1.0 - p));
    const auto a = ma.poly->coeffs(), b = mb.poly->coeffs();
    ASSERT_EQ(a.size(), b.size());
    // p q and (1-p)(1-q) differ by at most one rounding in binary
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 4.0 * kEps * std::abs(a[k])) << "p=" << p << " k=" << k;
  }
  const auto mh = make_model("interval_weighted", with_p(0.25)), mg = make_model("interval_weighted", with_p(0.75));
  const auto h = mh.poly->coeffs(), g = mg.poly->coeffs();
  for (std::size_t k = 0; k < h.size(); ++k) EXPECT_EQ(h[k], g[k]);
}

TEST(MakeModel, WeightedHalfIsCubic) {
  EXPECT_EQ(*make_model("interval_weighted", with_p(0.5)).poly, *make_model("interval_cubic").poly);
}

TEST(ModelZeta, QuadraticIsRiemann) {
  ModelEvaluator q(make_model("interval_quadratic"));
  EXPECT_NEAR(q(2.0).value.real(), kPi * kPi / 6.0, 1e-8);
  EXPECT_NEAR(q(cplx(3.0, 2.0)).value.real(), riemann_reference(cplx(3.0, 2.0)).value.real(), 1e-8);
  EXPECT_NEAR(q(0.5).value.real(), riemann_reference(0.5).value.real(), 1e-6);
  EXPECT_EQ(q(0.5).method, Method::continued);
}

TEST(ModelZeta, CubicIsRiemann) {
  ModelEvaluator c(make_model("interval_cubic"));
  for (double s : {2.0, 4.0}) EXPECT_NEAR(c(s).value.real(), riemann_reference(s).value.real(), 1e-8);
}

TEST(ModelZeta, CubicAlternateConstantOffByThreeHalvesPower) {
  const auto m = make_model("interval_cubic");
  const double ratio = m.constants.at("C_3pi_over_sqrt2") / m.constants.at("C");
  EXPECT_NEAR(ratio, 1.5, 1e-15);
}

TEST(ModelZeta, WeightedHalfMatchesCubic) {
  // same polynomial; the two formulas differ by the constant (sqrt2/pi)^s
  ModelEvaluator w(make_model("interval_weighted", with_p(0.5)));
  ModelEvaluator c(make_model("interval_cubic"));
  for (double s : {2.0, 4.0}) {
    const double factor = std::pow(std::sqrt(2.0) / kPi, s);
    EXPECT_NEAR(w(s).value.real(), factor * c(s).value.real(), 1e-8) << "s=" << s;
  }
}

TEST(ModelZeta, WeightedMetadata) {
  ModelEvaluator w(make_model("interval_weighted", with_p(0.3)));
  const auto r = w(2.0);
  EXPECT_NEAR(r.value.real(), 0.411764705882353, 1e-10);
  bool flag = false, fit = false;
  for (const auto& [k, v] : r.meta) {
    if (k == "normalization" && v == "oracle-calibrated") flag = true;
    if (k == "eigen_scale_fit") fit = true;
  }
  EXPECT_TRUE(flag);
  EXPECT_TRUE(fit);
}

TEST(WeightedCalibration, RenormalizedEigenvaluesMatchFormula) {
  for (double p : {0.2, 0.3, 0.5}) {
    const auto cal = calibrate_weighted(p, 4, 4);
    EXPECT_NEAR(cal.scale, 1.0, 2e-3) << "p=" << p;
    EXPECT_LT(cal.spread, 2e-3);
  }
}

TEST(ModelZeta, GasketFrozenValues) {
  EXPECT_NEAR(sg()(2.0).value.real(), 14.0 / 15.0, 1e-9);
  EXPECT_NEAR(sg()(4.0).value.real(), 8.0 / 75.0, 1e-9);
  const auto v = sg()(cplx(2.0, 3.0)).value;
  EXPECT_NEAR(v.real(), -0.226316874325840, 1e-9);
  EXPECT_NEAR(v.imag(), -0.224567735817497, 1e-9);
  EXPECT_NEAR(sg()(0.5).value.real(), -0.85854460481263, 1e-7);
}

TEST(ModelZeta, GasketMatchesMatrixTrace) {
  // 5^n times the level-n spectrum converges to the model spectrum; at s = 4
  // the sum is dominated by the lowest eigenvalues
  auto level_sum = [](int n) {
    const auto ev = jacobi_eigen(sg_laplacian(n).entries, false).values;
    double s = 0.0;
    for (std::size_t i = 1; i < ev.size(); ++i) s += std::pow(std::pow(5.0, n) * ev[i], -2.0);
    return s;
  };
  const double z = sg()(4.0).value.real();
  const double e3 = std::abs(level_sum(3) - z), e4 = std::abs(level_sum(4) - z);
  EXPECT_LT(e4, 1e-2 * z);
  EXPECT_LT(e4, e3 / 3.0);
}

TEST(ModelZeta, GasketTwoFormsAgree) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(1.5, 4.0), im(-20.0, 20.0);
  for (int k = 0; k < 50; ++k) {
    const cplx s(re(rng), im(rng));
    const cplx x = std::exp(-0.5 * s * std::log(5.0));
    const auto a = sg_coefficients(x), b = sg_coefficients_alt(s);
    EXPECT_LT(std::abs(a.A - b.A), 1e-12 * std::max(1.0, std::abs(a.A)));
    EXPECT_LT(std::abs(a.B - b.B), 1e-12 * std::max(1.0, std::abs(a.B)));
  }
  const auto r = sg()(cplx(2.0, 3.0));
  EXPECT_EQ(r.meta.front().first, "forms_checked");
}

TEST(ModelZeta, GasketFactorPoles) {
  const double ds = std::log(9.0) / std::log(5.0);
  try {
    sg()(cplx(ds, 0.0));
    FAIL();
  } catch (const PoleError& e) {
    EXPECT_EQ(e.factor, "1 - 3*5^(-s/2)");
  }
  EXPECT_THROW(sg()(cplx(ds, 4.0 * kPi / std::log(5.0))), PoleError);
  EXPECT_THROW(sg()(cplx(0.0, 4.0 * kPi / std::log(5.0))), Error);
}

TEST(ModelZeta, GasketExponentOrdering) {
  const double dR = std::log(4.0) / std::log(5.0), ds = std::log(9.0) / std::log(5.0);
  EXPECT_LT(0.0, dR);
  EXPECT_LT(dR, 1.0);
  EXPECT_LT(1.0, ds);
  EXPECT_LT(ds, 2.0);
}

TEST(Cancellation, Probe) {
  const auto r = sg_cancellation_probe({1e-2, 1e-3, 1e-4});
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) EXPECT_TRUE(std::isfinite(row.sum));
  EXPECT_LT(r.rows[1].sum / r.rows[2].sum, 2.0);
  EXPECT_GT(r.rows[2].sum / r.rows[1].sum, 0.5);
  EXPECT_GT(r.rows[2].term_a / r.rows[1].term_a, 8.0);
  EXPECT_GT(r.rows[2].term_b / r.rows[1].term_b, 8.0);
  EXPECT_DOUBLE_EQ(r.coeff_a_at_half, 1.0);
  EXPECT_DOUBLE_EQ(r.coeff_b_at_half, -1.0);
  EXPECT_TRUE(r.coeff_check);
  EXPECT_THROW(sg_cancellation_probe({0.1}), ArgumentError);
}

TEST(Strings, CantorGeometric) {
  const auto ss = StringSpec::cantor();
  EXPECT_EQ(string_geometric_zeta(ss, 1.0).value.real(), 1.0);
  for (double s : {2.0, 3.0, 0.5})
    EXPECT_NEAR(string_geometric_zeta(ss, s).value.real(), 1.0 / (std::pow(3.0, s) - 2.0), 1e-14);
  EXPECT_THROW(string_geometric_zeta(ss, std::log(2.0) / std::log(3.0)), PoleError);
}

TEST(Strings, ExplicitLengths) {
  const auto ss = StringSpec::explicit_lengths({0.5, 0.25, 0.25});
  EXPECT_DOUBLE_EQ(string_geometric_zeta(ss, 1.0).value.real(), 1.0);
  EXPECT_NEAR(string_spectral_zeta(StringSpec::explicit_lengths({1.0}), 2.0).value.real(), std::pow(kPi, 4) / 6.0, 1e-11);
}

TEST(Strings, CantorSpectral) {
  const auto ss = StringSpec::cantor();
  EXPECT_NEAR(string_spectral_zeta(ss, 2.0).value.real(), kPi * kPi * (kPi * kPi / 6.0) / 7.0, 1e-12);
  EXPECT_NEAR(string_spectral_zeta(ss, 2.0).value.real(), 2.31926407, 1e-8);
  EXPECT_THROW(string_spectral_zeta(ss, 1.0), PoleError);
  EXPECT_NEAR(model_zeta(make_model("cantor"), 3.0).value.real(),
              std::pow(kPi, 3) * riemann_reference(3.0).value.real() / 25.0, 1e-12);
}

TEST(ComplexDimensions, Cantor) {
  const auto d = complex_dimensions(StringSpec::cantor());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_TRUE(d[0].isolated());
  EXPECT_DOUBLE_EQ(d[0].base_re, 1.0);
  EXPECT_NEAR(d[1].base_re, 0.6309297535714574, 1e-15);
  EXPECT_NEAR(d[1].imag_period, 2.0 * kPi / std::log(3.0), 1e-15);
  EXPECT_NEAR(d[1].imag_period, 5.7192, 1e-4);
}

TEST(ComplexDimensions, Gasket) {
  const auto d = complex_dimensions(make_model("sg"));
  bool has_ds = false, canceled = false;
  for (const auto& l : d) {
    if (std::abs(l.base_re - std::log(9.0) / std::log(5.0)) < 1e-15) has_ds = true;
    if (l.label == "polynomial") canceled = l.canceled;
    if (!l.isolated()) {
      EXPECT_NEAR(l.imag_period, 4.0 * kPi / std::log(5.0), 1e-14);
    }
  }
  EXPECT_TRUE(has_ds);
  EXPECT_TRUE(canceled);
}
