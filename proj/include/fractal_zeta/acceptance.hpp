#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/models.hpp"
#include "fractal_zeta/oracles.hpp"
#include "fractal_zeta/polydyn.hpp"
#include "fractal_zeta/riemann.hpp"
#include "fractal_zeta/spectrum.hpp"
#include "fractal_zeta/zeta.hpp"

namespace fzeta {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool numeric_pass = false;
  double seconds = 0.0;
  double limit_seconds = 0.0;
  std::string detail;

  bool pass() const { return numeric_pass && seconds < limit_seconds; }
};

namespace accept_detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline const RealPolynomial& quadratic() {
  static const RealPolynomial p{0.0, 4.0, -2.0};
  return p;
}
inline const RealPolynomial& cubic() {
  static const RealPolynomial p{0.0, 9.0, -12.0, 4.0};
  return p;
}
inline const RealPolynomial& gasket() {
  static const RealPolynomial p{0.0, 5.0, -4.0};
  return p;
}

// ½ C^s ζ_{0,R}(s) against the reference at each s; the inner tolerance is
// scaled so the product meets `tol`.
inline bool riemann_identity(const RealPolynomial& R, double C, const std::vector<double>& ss, double tol, std::string& detail) {
  ZetaEngine eng(build_branch_system(R));
  bool ok = true;
  for (double s : ss) {
    const double pre = 0.5 * std::pow(C, s);
    const ZetaResult z = eng.direct(0.0, s, 0.1 * tol / pre);
    const double ref = riemann_reference(s).value.real();
    const double err = std::abs(pre * z.value.real() - ref);
    ok = ok && err <= tol;
    detail += " s=" + std::to_string(static_cast<int>(s)) + ":" + sci(err);
  }
  return ok;
}

// Direct value at the finest tolerance the engine can certify within its budget.
inline ZetaResult reachable_direct(ZetaEngine& eng, double z0, cplx s, double tol) {
  try {
    return eng.direct(z0, s, tol);
  } catch (const ResourceError& e) {
    return eng.direct(z0, s, 1.01 * e.reachable / 0.9);
  }
}

inline bool c1(std::string& d) {
  d = "|error|";
  return riemann_identity(quadratic(), std::sqrt(2.0) * kPi, {2, 3, 4, 6}, 1e-8, d);
}

inline bool c2(std::string& d) {
  d = "C=3pi/sqrt2 |error|";
  const bool ok = riemann_identity(cubic(), 3.0 * kPi / std::sqrt(2.0), {2, 4}, 1e-6, d);
  if (!ok) {
    std::string alt;
    const bool alt_ok = riemann_identity(cubic(), std::sqrt(2.0) * kPi, {2, 4}, 1e-6, alt);
    d += "; ratio is (3/2)^s; with C=sqrt2*pi" + alt + (alt_ok ? " (passes)" : " (fails)");
  }
  return ok;
}

inline bool c3(std::string& d) {
  const BranchSystem bs = build_branch_system(quadratic());
  const int n = 20;
  Word w;
  w.indices.assign(n, 1);
  const double z = inverse_orbit(bs, w, 2.0);
  const double half_angle = kPi * std::ldexp(1.0, -n - 1);
  const double closed = 2.0 * std::sin(half_angle) * std::sin(half_angle);  // 1 − cos(π 2^{-n})
  const double lim = std::ldexp(z, 2 * n);
  const double err = std::abs(lim - kPi * kPi / 2.0);
  const double trig = std::abs(z - closed) / closed;
  d = "|4^n R1^-n(2) - pi^2/2|=" + sci(err) + " rel vs trig=" + sci(trig);
  return err < 1e-9 && trig < 1e-12;
}

inline bool c4(std::string& d) {
  const ModelSpec m = make_model("interval_uniform");
  bool ok = true;
  double dev = 0.0;
  for (int n = 0; n <= 5; ++n) {
    const auto r = verify_decimation(m, n, 1e-9);
    ok = ok && r.verdict;
    dev = std::max(dev, r.max_abs_dev);
  }
  d = "n=0..5 max dev " + sci(dev);
  return ok;
}

inline bool c5(std::string& d) {
  bool ok = true;
  double dev = 0.0;
  for (double p : {0.2, 0.3, 0.45})
    for (int n = 0; n <= 3; ++n) {
      const auto r = weighted_spectrum_check(p, n, 1e-8);
      ok = ok && r.verdict;
      dev = std::max(dev, r.max_abs_dev);
      for (const auto& mv : r.matched)
        if (std::abs(mv.value - (1.0 + p)) < 1e-8 || std::abs(mv.value - (1.0 - p)) < 1e-8) ok = false;
    }
  d = "p in {0.2,0.3,0.45}, n=0..3 max dev " + sci(dev);
  return ok;
}

inline bool c6(std::string& d) {
  std::string found;
  for (BoundaryMode mode : {BoundaryMode::neumann, BoundaryMode::dirichlet}) {
    bool ok = true;
    for (int n = 1; n <= 4; ++n) ok = ok && sg_series_check(n, mode).verdict;
    if (ok && found.empty()) found = to_string(mode);
    d += std::string(to_string(mode)) + (ok ? ":match " : ":mismatch ");
  }
  d += "-> mode " + (found.empty() ? std::string("none") : found);
  return !found.empty();
}

inline bool c7(std::string& d) {
  bool ok = true;
  double worst = 0.0;
  int points = 0;
  for (const RealPolynomial* R : {&quadratic(), &gasket()}) {
    EngineOptions opt;
    opt.node_budget = std::size_t{1} << 20;
    ZetaEngine eng(build_branch_system(*R), opt);
    const double dR = eng.system().d_R;
    const double z0 = R == &quadratic() ? 0.0 : 0.75;
    for (int k = 0; k < 10; ++k)
      for (double im : {0.0, 2.5}) {
        const cplx s(dR + 0.1 + 1.9 * (k + 1) / 11.0, im);
        const ZetaResult a = reachable_direct(eng, z0, s, 1e-10);
        const ZetaResult b = eng.continued(z0, s);
        const double gap = std::abs(a.value - b.value);
        const double budget = a.abs_error + b.abs_error;
        worst = std::max(worst, gap / budget);
        ok = ok && gap <= budget;
        ++points;
      }
  }
  d = std::to_string(points) + " points, max |direct-continued|/(err_d+err_c)=" + sci(worst);
  return ok;
}

inline bool c8(std::string& d) {
  bool ok = true;
  for (const RealPolynomial* R : {&quadratic(), &gasket()}) {
    ZetaEngine eng(build_branch_system(*R));
    const BranchSystem& bs = eng.system();
    const double z0 = R == &quadratic() ? 0.0 : 0.75;
    auto g = [&](double sigma) {
      const cplx s(sigma, 0.0);
      return (1.0 - static_cast<double>(bs.N) * std::exp(-0.5 * s * std::log(bs.c))) * eng.continued(z0, s).value;
    };
    const double h = 1e-4;
    const cplx gm = g(bs.d_R - h), gp = g(bs.d_R + h);
    const double var = std::abs(gp - gm);
    const double lo = std::abs(eng.continued(z0, cplx(bs.d_R - h, 0.0)).value);
    const double hi = std::abs(eng.continued(z0, cplx(bs.d_R + h, 0.0)).value);
    ok = ok && std::isfinite(std::abs(gm)) && std::isfinite(std::abs(gp)) && var < 1e-3 && lo > 1e3 && hi > 1e3;
    d += (R == &quadratic() ? "quadratic" : " gasket") + std::string(" var=") + sci(var) + " |zeta(dR-h)|=" + sci(lo) +
         " |zeta(dR+h)|=" + sci(hi);
  }
  return ok;
}

inline bool c9(std::string& d) {
  const CancellationReport r = sg_cancellation_probe({1e-2, 1e-3, 1e-4});
  double mn = r.rows[0].sum, mx = r.rows[0].sum;
  bool grow = true;
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    mn = std::min(mn, r.rows[i].sum);
    mx = std::max(mx, r.rows[i].sum);
    grow = grow && r.rows[i].term_a >= 8.0 * r.rows[i - 1].term_a && r.rows[i].term_b >= 8.0 * r.rows[i - 1].term_b;
  }
  d = "|sum| in [" + sci(mn) + "," + sci(mx) + "], terms at 1e-4: " + sci(r.rows.back().term_a) + "," + sci(r.rows.back().term_b) +
      ", coeffs " + sci(r.coeff_a_at_half) + "," + sci(r.coeff_b_at_half);
  return mx < 2.0 * mn && grow && r.coeff_check;
}

inline bool c10(std::string& d) {
  const StringSpec ss = StringSpec::cantor();
  const double g1 = string_geometric_zeta(ss, cplx(1.0, 0.0)).value.real();
  bool ok = g1 == 1.0;
  double worst = 0.0;
  for (double s : {2.0, 3.0}) {
    const cplx a = string_spectral_zeta(ss, s).value;
    const double ref = std::pow(kPi, s) * riemann_reference(s).value.real() / (std::pow(3.0, s) - 2.0);
    worst = std::max(worst, std::abs(a - ref));
  }
  ok = ok && worst <= 1e-10;
  bool lattice = false;
  for (const auto& l : complex_dimensions(ss))
    if (!l.isolated() && std::abs(l.base_re - std::log(2.0) / std::log(3.0)) < 1e-15 &&
        std::abs(l.imag_period - 2.0 * kPi / std::log(3.0)) < 1e-15)
      lattice = true;
  d = "zeta_L(1)=" + std::to_string(g1) + " max product error " + sci(worst) + (lattice ? " lattice ok" : " lattice missing");
  return ok && lattice;
}

inline bool c11(std::string& d) {
  const BranchSystem bs = build_branch_system(gasket());
  const SpectrumList sl = enumerate(bs, 0.75, 1e6);
  // Least squares on a log-spaced grid of 401 points.
  const int K = 401;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < K; ++k) {
    const double x = std::log(1e2) + (std::log(1e6) - std::log(1e2)) * k / (K - 1);
    const double y = std::log(static_cast<double>(counting(sl, std::exp(x))));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (K * sxy - sx * sy) / (K * sxx - sx * sx);
  const double target = bs.d_R / 2.0;
  const double rel = std::abs(slope - target) / target;
  d = "slope " + sci(slope) + " target " + sci(target) + " rel " + sci(rel);
  return rel < 0.05;
}

inline bool c12(std::string& d) {
  ZetaEngine eng(build_branch_system(quadratic()));
  const double m0 = eng.mellin(cplx(0.0, 0.0), 14).value.real();
  const double m2 = eng.mellin(cplx(-2.0, 0.0), 14).value.real();
  d = "|M(0)-1|=" + sci(std::abs(m0 - 1.0)) + " |M(-2)-1|=" + sci(std::abs(m2 - 1.0));
  return std::abs(m0 - 1.0) <= 1e-12 && std::abs(m2 - 1.0) <= 1e-3;
}

struct Entry {
  const char* name;
  double limit;
  bool (*run)(std::string&);
};

inline const std::vector<Entry>& table() {
  static const std::vector<Entry> t = {
      {"riemann identity, quadratic", 1.0, c1},   {"riemann identity, cubic", 5.0, c2},
      {"fatou closed form", 0.1, c3},             {"decimation, uniform chain", 2.0, c4},
      {"decimation, weighted chain", 5.0, c5},    {"gasket multiplicities", 30.0, c6},
      {"continuation consistency", 30.0, c7},     {"pole at d_R", 10.0, c8},
      {"gasket cancellation", 10.0, c9},          {"cantor string", 1.0, c10},
      {"counting exponent", 5.0, c11},            {"mellin moments", 5.0, c12},
  };
  return t;
}

}  // namespace accept_detail

inline int acceptance_count() { return static_cast<int>(accept_detail::table().size()); }

/// Runs criterion `id` (1-based). Library errors count as a failure with the message as detail.
inline CriterionResult run_criterion(int id) {
  const auto& t = accept_detail::table();
  if (id < 1 || id > static_cast<int>(t.size())) throw ArgumentError("acceptance: criterion id out of range");
  const auto& e = t[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.name = e.name;
  r.limit_seconds = e.limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.numeric_pass = e.run(r.detail);
  } catch (const std::exception& ex) {
    r.numeric_pass = false;
    r.detail += std::string(" error: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "[%s] %2d %-28s %7.3fs (limit %gs)", r.pass() ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.limit_seconds);
  std::string s = head;
  if (r.numeric_pass && !r.pass()) s += " over time limit;";
  return s + " " + r.detail;
}

}  // namespace fzeta
