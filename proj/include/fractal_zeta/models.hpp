#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/model_spec.hpp"
#include "fractal_zeta/oracles.hpp"
#include "fractal_zeta/riemann.hpp"
#include "fractal_zeta/spectrum.hpp"
#include "fractal_zeta/zeta.hpp"

namespace fzeta {

struct ModelParams {
  double p = 0.5;
  std::optional<StringSpec> string;
  std::optional<double> tol;
};

inline ModelParams with_p(double p) {
  ModelParams m;
  m.p = p;
  return m;
}

/// Canonical family name for user-facing aliases ("sg", "quadratic", ...).
inline Family parse_family(const std::string& name) {
  static const std::map<std::string, Family> names = {
      {"interval_quadratic", Family::interval_quadratic}, {"quadratic", Family::interval_quadratic},
      {"interval_uniform", Family::interval_quadratic},   {"interval_cubic", Family::interval_cubic},
      {"cubic", Family::interval_cubic},                  {"interval_weighted", Family::interval_weighted},
      {"weighted", Family::interval_weighted},            {"sierpinski_gasket", Family::sierpinski_gasket},
      {"sg", Family::sierpinski_gasket},                  {"fractal_string", Family::fractal_string},
      {"string", Family::fractal_string},                 {"cantor", Family::fractal_string},
  };
  auto it = names.find(name);
  if (it == names.end()) throw ArgumentError("unknown model '" + name + "'");
  return it->second;
}

/// Sign-conjugated weighted cubic z(z²−3z+2+pq)/pq.
inline RealPolynomial weighted_polynomial(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("weighted polynomial: p must lie in (0,1)");
  const double pq = p * (1.0 - p);
  return RealPolynomial({0.0, (2.0 + pq) / pq, -3.0 / pq, 1.0 / pq});
}

struct WeightedCalibration {
  double scale = 1.0;   // mean ratio of renormalized matrix eigenvalues to formula eigenvalues
  double spread = 0.0;  // max deviation of the individual ratios from the mean
  int level = 0;
  int count = 0;
};

/// Compares the lowest nonzero eigenvalues of c^n L_{p,n} with the lowest
/// terms c^k λ (k ≥ 1, λ from both generator spectra) of the weighted formula.
inline WeightedCalibration calibrate_weighted(double p, int level = 4, int count = 4) {
  const double q = 1.0 - p;
  const BranchSystem bs = build_branch_system(weighted_polynomial(p));
  std::vector<double> formula;
  const double cutoff = std::pow(bs.c, 3) * 4.0;
  for (double z0 : {1.0 - q, 1.0 + q})
    for (const auto& a : enumerate(bs, z0, cutoff).atoms)
      for (int k = 1; std::pow(bs.c, k) * a.lambda <= cutoff; ++k)
        for (long r = 0; r < a.multiplicity; ++r) formula.push_back(std::pow(bs.c, k) * a.lambda);
  std::sort(formula.begin(), formula.end());
  const auto ev = jacobi_eigen(interval_weighted(p, level).entries, false).values;
  WeightedCalibration cal;
  cal.level = level;
  cal.count = std::min<int>(count, static_cast<int>(formula.size()));
  std::vector<double> ratios;
  for (int i = 0; i < cal.count; ++i)
    ratios.push_back(std::pow(bs.c, level) * ev[static_cast<std::size_t>(i) + 1] / formula[static_cast<std::size_t>(i)]);
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  cal.scale = mean;
  for (double r : ratios) cal.spread = std::max(cal.spread, std::abs(r - mean));
  return cal;
}

inline ModelSpec make_model(const std::string& name, const ModelParams& params = {}) {
  ModelSpec m;
  m.family = parse_family(name);
  m.name = to_string(m.family);
  if (params.tol) m.tol = *params.tol;
  const double sqrt2 = std::sqrt(2.0);
  switch (m.family) {
    case Family::interval_quadratic:
      m.poly = RealPolynomial{0.0, 4.0, -2.0};
      m.generators = {{0.0, "riemann"}};
      m.c_renorm = 4.0;
      m.constants = {{"C", sqrt2 * kPi}, {"half", 0.5}};
      m.exceptional = {{1.0, [](int) { return 1L; }, "double preimage of 2, simple eigenvalue"}};
      break;
    case Family::interval_cubic:
      m.poly = RealPolynomial{0.0, 9.0, -12.0, 4.0};
      m.generators = {{0.0, "riemann"}};
      m.c_renorm = 9.0;
      // C = sqrt(2) pi reproduces the Riemann zeta function; 3 pi / sqrt(2) is kept for reference.
      m.constants = {{"C", sqrt2 * kPi}, {"C_3pi_over_sqrt2", 3.0 * kPi / sqrt2}, {"half", 0.5}};
      m.exceptional = {{0.5, [](int) { return 1L; }, "double preimage of 2"},
                       {1.5, [](int) { return 1L; }, "double preimage of 0"}};
      break;
    case Family::interval_weighted: {
      const double p = params.p;
      if (!(p > 0.0 && p < 1.0)) throw ArgumentError("interval_weighted: p must lie in (0,1)");
      const double q = 1.0 - p, pq = p * q;
      m.p = p;
      m.poly = weighted_polynomial(p);
      m.generators = {{1.0 - q, "z1"}, {1.0 + q, "z2"}};
      m.c_renorm = 1.0 + 2.0 / pq;
      m.constants = {{"p", p}, {"d_s", std::log(9.0) / std::log(m.c_renorm)}};
      const bool symmetric = std::abs(p - 0.5) < 1e-12;
      for (double v : {1.0 - p, 1.0 + p})
        m.exceptional.push_back({v, [symmetric](int) { return symmetric ? 1L : 0L; }, "pole of the boundary factor"});
      const WeightedCalibration cal = calibrate_weighted(p);
      m.constants["eigen_scale_fit"] = cal.scale;
      m.constants["eigen_scale_spread"] = cal.spread;
      break;
    }
    case Family::sierpinski_gasket:
      m.poly = RealPolynomial{0.0, 5.0, -4.0};
      m.generators = {{0.75, "3/4-series"}, {1.25, "5/4-series"}};
      m.c_renorm = 5.0;
      m.constants = {{"d_s", std::log(9.0) / std::log(5.0)}, {"d_R", std::log(4.0) / std::log(5.0)}};
      m.exceptional = {
          {0.5, [](int) { return 0L; }, "never an eigenvalue"},
          {1.25, [](int L) { long r = 1; for (int k = 1; k < L; ++k) r *= 3; return (r - 1) / 2; }, "5/4 insertion"},
          {1.5, [](int L) { long r = 1; for (int k = 0; k < L; ++k) r *= 3; return (r + 3) / 2; }, "3/2 insertion"},
      };
      break;
    case Family::fractal_string:
      m.string = params.string ? *params.string : StringSpec::cantor();
      if (m.string->self_similar && !(m.string->r > 1.0 && m.string->N >= 1 && m.string->c > 0.0))
        throw ArgumentError("fractal_string: need r > 1, N >= 1, c > 0");
      if (!m.string->self_similar && m.string->lengths.empty()) throw ArgumentError("fractal_string: empty length list");
      break;
  }
  return m;
}

/// ζ_L(s) = Σ l_k^s, closed form c^s / (1 − N r^{-s}) in the self-similar case.
inline ZetaResult string_geometric_zeta(const StringSpec& ss, cplx s) {
  ZetaResult r;
  if (ss.self_similar) {
    const PoleLattice lat{std::log(static_cast<double>(ss.N)) / std::log(ss.r), 2.0 * kPi / std::log(ss.r), "geometric"};
    if (lat.distance(s) < 1e-6)
      throw PoleError("string_geometric_zeta: s within 1e-6 of a zero of 1 - N r^{-s}", "1 - N r^{-s}", lat.base_re,
                      lat.imag_period);
    // 1 / (c^{-s} − N (c r)^{-s}); real powers keep integer cases exact.
    auto pw = [&](double base) {
      return s.imag() == 0.0 ? cplx(std::pow(base, -s.real()), 0.0) : std::exp(-s * std::log(base));
    };
    r.value = 1.0 / (pw(ss.c) - static_cast<double>(ss.N) * pw(ss.c * ss.r));
    r.abs_error = 8.0 * kEps * std::abs(r.value);
    r.method = Method::closed_form;
    r.terms_used = 1;
  } else {
    ComplexCompensatedSum acc;
    for (double l : ss.lengths) {
      if (!(l > 0.0)) throw ArgumentError("string_geometric_zeta: lengths must be positive");
      acc.add(s.imag() == 0.0 ? cplx(std::pow(l, s.real()), 0.0) : std::exp(s * std::log(l)));
    }
    r.value = acc.value();
    r.abs_error = 4.0 * kEps * acc.abs_sum();
    r.method = Method::direct;
    r.terms_used = static_cast<long>(ss.lengths.size());
  }
  return r;
}

/// ζ_A(s) = π^s ζ(s) ζ_L(s) with ζ from the Euler–Maclaurin reference.
inline ZetaResult string_spectral_zeta(const StringSpec& ss, cplx s) {
  const ZetaResult zr = riemann_reference(s);
  const ZetaResult zl = string_geometric_zeta(ss, s);
  const cplx pis = std::exp(s * std::log(kPi));
  ZetaResult r;
  r.value = pis * zr.value * zl.value;
  r.abs_error = std::abs(pis) * (zr.abs_error * std::abs(zl.value) + zl.abs_error * std::abs(zr.value) + zr.abs_error * zl.abs_error) +
                4.0 * kEps * std::abs(r.value);
  r.method = Method::closed_form;
  r.terms_used = zr.terms_used + zl.terms_used;
  return r;
}

/// Geometric coefficients of the gasket formula at x = 5^{-s/2}:
/// A multiplies ζ_{3/4}, B multiplies ζ_{5/4}.
struct SgCoefficients {
  cplx A, B;
};

inline SgCoefficients sg_coefficients(cplx x) {
  return {0.5 * x * (1.0 / (1.0 - 3.0 * x) + 3.0 / (1.0 - x)), 0.5 * x * x * (3.0 / (1.0 - 3.0 * x) - 1.0 / (1.0 - x))};
}

/// The same coefficients in the 5^{s/2} form.
inline SgCoefficients sg_coefficients_alt(cplx s) {
  const cplx y = std::exp(0.5 * s * std::log(5.0));  // 5^{s/2}
  const cplx x = 1.0 / y;
  return {0.5 * (1.0 / (y - 3.0) + 3.0 / (y - 1.0)), 0.5 * (3.0 * x / (y - 3.0) - x / (y - 1.0))};
}

/// Evaluates a model's spectral zeta function; caches one engine per model.
class ModelEvaluator {
 public:
  explicit ModelEvaluator(ModelSpec model, EngineOptions opt = {}) : model_(std::move(model)) {
    if (model_.poly) engine_ = std::make_unique<ZetaEngine>(build_branch_system(*model_.poly), opt);
  }

  const ModelSpec& model() const { return model_; }
  ZetaEngine* engine() { return engine_.get(); }

  /// ζ_{z0,R}(s) by the direct series where it converges, else by continuation.
  ZetaResult generator_zeta(double z0, cplx s, double tol) {
    const BranchSystem& bs = engine_->system();
    if (s.real() > bs.d_R + 0.05) return engine_->direct(z0, s, tol);
    return engine_->continued(z0, s);
  }

  ZetaResult operator()(cplx s) {
    switch (model_.family) {
      case Family::interval_quadratic:
      case Family::interval_cubic: return eval_interval(s);
      case Family::interval_weighted: return eval_weighted(s);
      case Family::sierpinski_gasket: return eval_sg(s).total;
      case Family::fractal_string: return string_spectral_zeta(*model_.string, s);
    }
    throw ArgumentError("model_zeta: unsupported family");
  }

  struct SgParts {
    ZetaResult total;
    cplx term_a, term_b;
  };

  SgParts eval_sg(cplx s) {
    const double logc = std::log(5.0);
    const PoleLattice fa{std::log(9.0) / logc, 4.0 * kPi / logc, "1 - 3*5^(-s/2)"};
    const PoleLattice fb{0.0, 4.0 * kPi / logc, "1 - 5^(-s/2)"};
    for (const PoleLattice& f : {fa, fb})
      if (f.distance(s) < 1e-6)
        throw PoleError("model_zeta: s within 1e-6 of a pole of geometric factor " + f.label, f.label, f.base_re, f.imag_period);
    const cplx x = std::exp(-0.5 * s * logc);
    const SgCoefficients c1 = sg_coefficients(x), c2 = sg_coefficients_alt(s);
    const double scale = std::max({1.0, std::abs(c1.A), std::abs(c1.B)});
    const double tol = model_.tol / scale;
    const ZetaResult za = generator_zeta(model_.generators[0].z0, s, tol);
    const ZetaResult zb = generator_zeta(model_.generators[1].z0, s, tol);
    SgParts out;
    out.term_a = c1.A * za.value;
    out.term_b = c1.B * zb.value;
    const cplx v1 = out.term_a + out.term_b;
    const cplx v2 = c2.A * za.value + c2.B * zb.value;
    if (std::abs(v1 - v2) > 1e-12 * std::max(1.0, std::abs(out.term_a) + std::abs(out.term_b)))
      throw ContractError("model_zeta: the two gasket forms disagree beyond 1e-12");
    out.total.value = v1;
    out.total.abs_error = std::abs(c1.A) * za.abs_error + std::abs(c1.B) * zb.abs_error + 8.0 * kEps * (std::abs(out.term_a) + std::abs(out.term_b));
    out.total.method = za.method;
    out.total.terms_used = za.terms_used + zb.terms_used;
    out.total.meta.push_back({"forms_checked", "2"});
    out.total.meta.push_back({"form_difference", fmt_double(std::abs(v1 - v2))});
    return out;
  }

 private:
  static std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
  }

  ZetaResult eval_interval(cplx s) {
    const cplx pre = model_.constants.at("half") * std::exp(s * std::log(model_.constants.at("C")));
    const ZetaResult z = generator_zeta(model_.generators[0].z0, s, model_.tol / std::max(1.0, std::abs(pre)));
    ZetaResult r;
    r.value = pre * z.value;
    r.abs_error = std::abs(pre) * z.abs_error;
    r.method = z.method;
    r.terms_used = z.terms_used;
    return r;
  }

  ZetaResult eval_weighted(cplx s) {
    const double logc = std::log(model_.c_renorm);
    const PoleLattice f{0.0, 4.0 * kPi / logc, "1 - c^(-s/2)"};
    if (f.distance(s) < 1e-6)
      throw PoleError("model_zeta: s within 1e-6 of a pole of geometric factor " + f.label, f.label, f.base_re, f.imag_period);
    const cplx x = std::exp(-0.5 * s * logc);
    const cplx pre = x / (1.0 - x);
    const double tol = model_.tol / std::max(1.0, std::abs(pre));
    const ZetaResult z1 = generator_zeta(model_.generators[0].z0, s, tol);
    const ZetaResult z2 = generator_zeta(model_.generators[1].z0, s, tol);
    ZetaResult r;
    r.value = pre * (z1.value + z2.value);
    r.abs_error = std::abs(pre) * (z1.abs_error + z2.abs_error);
    r.method = z1.method;
    r.terms_used = z1.terms_used + z2.terms_used;
    r.meta.push_back({"normalization", "oracle-calibrated"});
    r.meta.push_back({"prefactor", "c^(-s/2)/(1-c^(-s/2))"});
    r.meta.push_back({"eigen_scale_fit", fmt_double(model_.constants.at("eigen_scale_fit"))});
    return r;
  }

  ModelSpec model_;
  std::unique_ptr<ZetaEngine> engine_;
};

inline ZetaResult model_zeta(const ModelSpec& model, cplx s) { return ModelEvaluator(model)(s); }

struct CancellationRow {
  double delta;
  double term_a;  // |ζ_{3/4} coefficient product|
  double term_b;  // |ζ_{5/4} coefficient product|
  double sum;     // |model value|
};

struct CancellationReport {
  std::vector<CancellationRow> rows;
  double coeff_a_at_half = 0.0;
  double coeff_b_at_half = 0.0;
  double coeff_sum = 0.0;
  bool coeff_check = false;
};

/// Gasket model at s = d_R + δ: both product terms blow up like 1/δ, their sum stays bounded.
inline CancellationReport sg_cancellation_probe(const std::vector<double>& deltas) {
  for (double d : deltas)
    if (!(d > 0.0 && d <= 1e-2)) throw ArgumentError("sg_cancellation_probe: deltas must lie in (0, 1e-2]");
  ModelEvaluator ev(make_model("sierpinski_gasket"));
  const double dR = ev.engine()->system().d_R;
  CancellationReport rep;
  for (double d : deltas) {
    const auto parts = ev.eval_sg(cplx(dR + d, 0.0));
    rep.rows.push_back({d, std::abs(parts.term_a), std::abs(parts.term_b), std::abs(parts.total.value)});
  }
  const SgCoefficients c = sg_coefficients(cplx(0.5, 0.0));
  rep.coeff_a_at_half = c.A.real();
  rep.coeff_b_at_half = c.B.real();
  rep.coeff_sum = std::abs(c.A + c.B);
  rep.coeff_check = std::abs(c.A - 1.0) <= 1e-12 && std::abs(c.B + 1.0) <= 1e-12 && rep.coeff_sum <= 1e-12;
  return rep;
}

/// Factor-derived pole lattices of a model or string.
inline std::vector<PoleLattice> complex_dimensions(const StringSpec& ss) {
  std::vector<PoleLattice> out{{1.0, 0.0, "riemann"}};
  if (ss.self_similar)
    out.push_back({std::log(static_cast<double>(ss.N)) / std::log(ss.r), 2.0 * kPi / std::log(ss.r), "zeros of 1 - N r^(-s)"});
  return out;
}

inline std::vector<PoleLattice> complex_dimensions(const ModelSpec& model) {
  if (model.family == Family::fractal_string) return complex_dimensions(*model.string);
  const BranchSystem bs = build_branch_system(*model.poly);
  PoleLattice poly = pole_lattice(bs);
  const double logc = std::log(bs.c);
  std::vector<PoleLattice> out;
  switch (model.family) {
    case Family::interval_quadratic:
    case Family::interval_cubic:
      out.push_back({1.0, 0.0, "riemann"});
      poly.label = "polynomial (only s=1 is a pole: the model equals the Riemann zeta function)";
      out.push_back(poly);
      break;
    case Family::interval_weighted:
      out.push_back({0.0, 4.0 * kPi / logc, "zeros of 1 - c^(-s/2)"});
      out.push_back(poly);
      break;
    case Family::sierpinski_gasket:
      out.push_back({std::log(9.0) / logc, 4.0 * kPi / logc,
                     "zeros of 1 - 3*5^(-s/2), period 4*pi/log5"});
      out.push_back({0.0, 4.0 * kPi / logc, "zeros of 1 - 5^(-s/2), period 4*pi/log5"});
      poly.canceled = true;
      out.push_back(poly);
      break;
    case Family::fractal_string: break;
  }
  return out;
}

}  // namespace fzeta
