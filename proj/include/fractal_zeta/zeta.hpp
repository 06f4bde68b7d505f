#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fractal_zeta/balanced_measure.hpp"
#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/numeric.hpp"
#include "fractal_zeta/polydyn.hpp"
#include "fractal_zeta/riemann.hpp"
#include "fractal_zeta/spectrum.hpp"
#include "fractal_zeta/zeta_result.hpp"

namespace fzeta {

struct EngineOptions {
  std::size_t node_budget = 10'000'000;  // words at the deepest level of a direct sum
  std::size_t psi_points = std::size_t{1} << 18;  // caps N^depth_m for the continuation
  std::size_t xi_points = std::size_t{1} << 16;   // caps N^depth_k * gauss_points
  int gauss_points = 6;
};

inline PoleLattice pole_lattice(const BranchSystem& bs) {
  return {bs.d_R, 4.0 * kPi / std::log(bs.c), "polynomial", false};
}

/// Σ multiplicity * λ^{-s/2} over a spectrum list, ascending, compensated.
inline cplx dirichlet_sum(const SpectrumList& sl, cplx s) {
  ComplexCompensatedSum acc;
  for (const auto& a : sl.atoms) acc.add(static_cast<double>(a.multiplicity) * neg_half_power_from_log(s, std::log(a.lambda)));
  return acc.value();
}

/// Evaluator for one branch system. Backward trees and linearizer values are
/// cached across calls, so one engine should serve many s values. Not
/// thread-safe; use one engine per thread.
class ZetaEngine {
 public:
  explicit ZetaEngine(BranchSystem bs, EngineOptions opt = {}) : bs_(std::move(bs)), opt_(opt), logc_(std::log(bs_.c)) {}

  const BranchSystem& system() const { return bs_; }
  const EngineOptions& options() const { return opt_; }

  int default_psi_depth() const {
    int m = 2;
    while (std::pow(static_cast<double>(bs_.N), m + 1) <= static_cast<double>(opt_.psi_points)) ++m;
    return m;
  }
  int default_xi_depth() const {
    int d = 4;
    while (std::pow(static_cast<double>(bs_.N), d + 1) * opt_.gauss_points <= static_cast<double>(opt_.xi_points)) ++d;
    return d;
  }

  /// Direct Dirichlet series. All words up to depth M are summed in ascending
  /// λ order; every depth-M cylinder's remaining tail is replaced by its
  /// geometric model at the image of the κ-mean, with a bound from the
  /// variation of 𝓡 over the cylinder.
  ZetaResult direct(double z0, cplx s, double tol) {
    if (!(tol > 0.0)) throw ArgumentError("dirichlet_direct: tol must be positive");
    check_generator(z0);
    const double sigma = s.real();
    if (!(sigma > bs_.d_R + 0.05))
      throw ConvergenceError("dirichlet_direct: Re(s) must exceed d_R + 0.05 = " + std::to_string(bs_.d_R + 0.05) +
                             "; use continued");
    const cplx q = static_cast<double>(bs_.N) * std::exp(-0.5 * s * logc_);
    const double aq = std::abs(q);
    const double geom = aq / (1.0 - aq);

    int M = 0;
    double bound = std::numeric_limits<double>::infinity();
    for (int m = 1;; ++m) {
      if (std::pow(static_cast<double>(bs_.N), m) > static_cast<double>(opt_.node_budget))
        throw ResourceError("dirichlet_direct: node budget exhausted before reaching tol; best bound " +
                                std::to_string(bound),
                            bound);
      extend_cylinders(m);
      const auto& A = cyl0_.log_plus[static_cast<std::size_t>(m)];
      const auto& B = cylb_.log_plus[static_cast<std::size_t>(m)];
      double acc = 0.0;
      for (std::size_t u = 0; u < A.size(); ++u) {
        const double la = std::min(A[u], B[u]), lb = std::max(A[u], B[u]);
        acc += std::exp(-0.5 * sigma * (m * logc_ + la)) * (lb - la);
      }
      bound = 0.5 * std::abs(s) * geom * acc;
      if (bound <= 0.9 * tol) {
        M = m;
        break;
      }
    }

    Tree& g = generator(z0);
    extend(g, M);
    std::vector<double> logs;
    for (int m = 0; m <= M; ++m)
      for (double lr : g.log_plus[static_cast<std::size_t>(m)]) logs.push_back(m * logc_ + lr);
    std::sort(logs.begin(), logs.end());
    ComplexCompensatedSum sum;
    for (double l : logs) sum.add(neg_half_power_from_log(s, l));
    ComplexCompensatedSum tail;
    for (double lm : cylmu_.log_plus[static_cast<std::size_t>(M)]) tail.add(neg_half_power_from_log(s, M * logc_ + lm));
    const cplx est = q / (1.0 - q) * tail.value();

    ZetaResult r;
    r.value = sum.value() + est;
    r.abs_error = bound + rounding(s) * (sum.abs_sum() + std::abs(est));
    r.method = Method::direct;
    r.terms_used = static_cast<long>(logs.size());
    r.meta.push_back({"depth", std::to_string(M)});
    return r;
  }

  /// ξ(s) = ∫_{J+} 𝓡^{-s/2} dκ by cylinder-Gauss quadrature; the error is the
  /// difference to the next coarser depth.
  ZetaResult xi(cplx s, int depth) {
    if (depth < 1) throw ArgumentError("xi: depth must be >= 1");
    const int other = depth > 1 ? depth - 1 : depth + 1;
    double abs1 = 0.0;
    const cplx v = xi_sum(s, depth, abs1);
    double abs2 = 0.0;
    const cplx w = xi_sum(s, other, abs2);
    ZetaResult r;
    r.value = v;
    r.abs_error = std::abs(v - w) + rounding(s) * abs1;
    r.method = Method::quadrature;
    r.terms_used = static_cast<long>(xi_nodes(depth).size());
    r.meta.push_back({"depth", std::to_string(depth)});
    r.meta.push_back({"gauss_points", std::to_string(opt_.gauss_points)});
    return r;
  }

  /// ψ(s) = Σ_m [c^{-sm/2} T_m(s) − q^m ξ(s)], T_m the W_m^+ sum; geometric
  /// (Aitken) extrapolation of the truncated tail.
  ZetaResult psi(double z0, cplx s, int depth_m, int depth_k) {
    if (depth_m < 2 || depth_k < 2) throw ArgumentError("psi: depths must be >= 2");
    check_generator(z0);
    check_strip(s, "psi");
    const PsiParts p = psi_parts(z0, s, depth_m, depth_k);
    ZetaResult r;
    r.value = p.S + p.tail;
    r.abs_error = p.err_tail + p.xi.abs_error * std::abs(p.sum_q) + p.err_round;
    r.method = Method::continued;
    r.terms_used = p.terms;
    r.meta.push_back({"depth_m", std::to_string(depth_m)});
    r.meta.push_back({"depth_k", std::to_string(depth_k)});
    r.meta.push_back({"error_bound", "heuristic"});
    return r;
  }

  /// ζ = ξ/(1 − N c^{-s/2}) + ψ, valid for Re(s) > −ε off the pole lattice.
  ZetaResult continued(double z0, cplx s) {
    check_generator(z0);
    check_strip(s, "continued");
    const PoleLattice lat = pole_lattice(bs_);
    if (lat.distance(s) < 1e-6)
      throw PoleError("continued: s within 1e-6 of the pole lattice d_R + i k 4π/log c", lat.label, lat.base_re,
                      lat.imag_period);
    const int M = default_psi_depth();
    const PsiParts p = psi_parts(z0, s, M, default_xi_depth());
    const cplx q = static_cast<double>(bs_.N) * std::exp(-0.5 * s * logc_);
    const cplx qM1 = std::pow(q, M + 1);
    ZetaResult r;
    r.value = p.raw + p.xi.value * qM1 / (1.0 - q) + p.tail;
    r.abs_error = p.err_tail + p.xi.abs_error * std::abs(qM1 / (1.0 - q)) + p.err_round;
    r.method = Method::continued;
    r.terms_used = p.terms;
    r.meta.push_back({"depth_m", std::to_string(M)});
    r.meta.push_back({"depth_k", std::to_string(default_xi_depth())});
    r.meta.push_back({"error_bound", "heuristic"});
    return r;
  }

  /// ℳ(s) = ∫ z^{-s/2} dκ over all words at the given depth.
  ZetaResult mellin(cplx s, int depth) {
    if (depth < 1) throw ArgumentError("mellin: depth must be >= 1");
    if (!(s.real() < bs_.d_R - 0.05))
      throw ConvergenceError("mellin: requires Re(s) < d_R - 0.05 = " + std::to_string(bs_.d_R - 0.05));
    auto eval = [&](int d, double& abs_sum) {
      ComplexCompensatedSum acc;
      for (const MeasureNode& nd : balanced_nodes(bs_, d, false)) acc.add(nd.weight * neg_half_power_from_log(s, std::log(nd.point)));
      abs_sum = acc.abs_sum();
      return acc.value();
    };
    double a1 = 0.0, a2 = 0.0;
    const cplx v = eval(depth, a1);
    const cplx w = eval(depth > 1 ? depth - 1 : depth + 1, a2);
    ZetaResult r;
    r.value = v;
    r.abs_error = std::abs(v - w) + 8.0 * kEps * a1;
    r.method = Method::quadrature;
    r.terms_used = static_cast<long>(std::pow(static_cast<double>(bs_.N), depth));
    r.meta.push_back({"error_bound", "heuristic"});
    return r;
  }

 private:
  struct Tree {
    double root = 0.0;
    std::vector<double> frontier;
    std::vector<std::vector<double>> log_plus;  // per depth, log 𝓡 at the W_m^+ points
  };
  struct PsiParts {
    cplx raw{};  // Σ_{m≤M} c^{-sm/2} T_m
    cplx S{};    // Σ_{m≤M} t_m
    cplx tail{};
    cplx sum_q{};
    double err_tail = 0.0;
    double err_round = 0.0;
    long terms = 0;
    ZetaResult xi;
  };

  static double rounding(cplx s) { return 0.5 * std::abs(s) * 4e-14 + 16.0 * kEps; }

  void check_generator(double z0) const {
    if (!bs_.i0.contains(z0, bs_.slack())) throw DomainError("generator z0 = " + std::to_string(z0) + " outside I_0");
  }

  void check_strip(cplx s, const char* who) const {
    const double lower = bs_.totally_disconnected ? -bs_.epsilon : 0.0;
    if (!(s.real() > lower))
      throw OutOfStripError(std::string(who) + ": requires Re(s) > " + std::to_string(lower));
  }

  void init_tree(Tree& t, double root) const {
    t.root = root;
    t.frontier = {root};
    t.log_plus.clear();
    t.log_plus.push_back(root > 0.0 ? std::vector<double>{log_fatou_fast(bs_, root)} : std::vector<double>{});
  }

  void extend(Tree& t, int depth) const {
    while (static_cast<int>(t.log_plus.size()) <= depth) {
      t.frontier = preimage_level(bs_, t.frontier);
      const std::size_t start = t.frontier.size() / static_cast<std::size_t>(bs_.N);
      std::vector<double> lp;
      lp.reserve(t.frontier.size() - start);
      for (std::size_t i = start; i < t.frontier.size(); ++i) lp.push_back(log_fatou_fast(bs_, t.frontier[i]));
      t.log_plus.push_back(std::move(lp));
    }
  }

  Tree& generator(double z0) {
    std::uint64_t key;
    std::memcpy(&key, &z0, sizeof key);
    auto it = gens_.find(key);
    if (it == gens_.end()) {
      Tree t;
      init_tree(t, z0);
      it = gens_.emplace(key, std::move(t)).first;
    }
    return it->second;
  }

  void extend_cylinders(int depth) {
    if (cyl0_.frontier.empty()) {
      init_tree(cyl0_, 0.0);
      init_tree(cylb_, bs_.hull.hi);
      init_tree(cylmu_, bs_.kappa_mean);
    }
    extend(cyl0_, depth);
    extend(cylb_, depth);
    extend(cylmu_, depth);
  }

  const std::vector<std::pair<double, double>>& xi_nodes(int depth) {
    auto it = xi_cache_.find(depth);
    if (it == xi_cache_.end()) {
      std::vector<std::pair<double, double>> v;
      for (const MeasureNode& nd : cylinder_gauss_nodes(bs_, depth, opt_.gauss_points, true))
        v.push_back({nd.weight, log_fatou_fast(bs_, nd.point)});
      it = xi_cache_.emplace(depth, std::move(v)).first;
    }
    return it->second;
  }

  cplx xi_sum(cplx s, int depth, double& abs_sum) {
    ComplexCompensatedSum acc;
    for (const auto& [w, lr] : xi_nodes(depth)) acc.add(w * neg_half_power_from_log(s, lr));
    abs_sum = acc.abs_sum();
    return acc.value();
  }

  PsiParts psi_parts(double z0, cplx s, int M, int depth_k) {
    PsiParts p;
    p.xi = xi(s, depth_k);
    const cplx xi_v = p.xi.value;
    const cplx q = static_cast<double>(bs_.N) * std::exp(-0.5 * s * logc_);
    Tree& g = generator(z0);
    extend(g, M);
    std::vector<cplx> t(static_cast<std::size_t>(M) + 1);
    ComplexCompensatedSum raw, S, sq;
    double abs_scale = 0.0;
    cplx qm = 1.0;
    for (int m = 0; m <= M; ++m) {
      ComplexCompensatedSum Tm;
      for (double lr : g.log_plus[static_cast<std::size_t>(m)]) Tm.add(neg_half_power_from_log(s, m * logc_ + lr));
      p.terms += static_cast<long>(g.log_plus[static_cast<std::size_t>(m)].size());
      t[static_cast<std::size_t>(m)] = Tm.value() - qm * xi_v;
      raw.add(Tm.value());
      S.add(t[static_cast<std::size_t>(m)]);
      sq.add(qm);
      abs_scale += Tm.abs_sum() + std::abs(qm * xi_v);
      qm *= q;
    }
    p.raw = raw.value();
    p.S = S.value();
    p.sum_q = sq.value();
    p.err_round = rounding(s) * abs_scale;

    // Geometric extrapolation from the last three terms.
    const cplx tM = t[static_cast<std::size_t>(M)], tM1 = t[static_cast<std::size_t>(M) - 1], tM2 = t[static_cast<std::size_t>(M) - 2];
    const double tiny = 1e-300;
    if (std::abs(tM1) > tiny && std::abs(tM2) > tiny) {
      const cplx rho = tM / tM1, rho1 = tM1 / tM2;
      if (std::abs(rho) < 0.95 && std::abs(rho1) < 0.95) {
        p.tail = tM * rho / (1.0 - rho);
        const cplx prev = tM1 * rho1 / (1.0 - rho1);
        // A_M − A_{M−1} = t_M + tail − prev.
        p.err_tail = std::abs(tM + p.tail - prev) + std::abs(rho - rho1) * std::abs(p.tail);
      } else {
        p.tail = 0.0;
        p.err_tail = std::abs(tM) / (1.0 - std::min(std::abs(rho), 0.95));
      }
    } else {
      p.tail = 0.0;
      p.err_tail = std::abs(tM);
    }
    return p;
  }

  BranchSystem bs_;
  EngineOptions opt_;
  double logc_;
  std::map<std::uint64_t, Tree> gens_;
  Tree cyl0_, cylb_, cylmu_;
  std::map<int, std::vector<std::pair<double, double>>> xi_cache_;
};

inline ZetaResult dirichlet_direct(const BranchSystem& bs, double z0, cplx s, double tol) {
  return ZetaEngine(bs).direct(z0, s, tol);
}
inline ZetaResult xi(const BranchSystem& bs, cplx s, int depth) { return ZetaEngine(bs).xi(s, depth); }
inline ZetaResult psi(const BranchSystem& bs, double z0, cplx s, int depth_m, int depth_k) {
  return ZetaEngine(bs).psi(z0, s, depth_m, depth_k);
}
inline ZetaResult continued(const BranchSystem& bs, double z0, cplx s) { return ZetaEngine(bs).continued(z0, s); }
inline ZetaResult mellin(const BranchSystem& bs, cplx s, int depth) { return ZetaEngine(bs).mellin(s, depth); }

}  // namespace fzeta
