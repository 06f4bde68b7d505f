#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/linalg.hpp"
#include "fractal_zeta/polydyn.hpp"

namespace fzeta {

/// Exact moments m_0..m_{count-1} of the balanced measure of R.
///
/// Uses the invariance  ∫ f dκ = ∫ (1/N) Σ_{R(x)=y} f(x) dκ(y): the power sums of
/// the roots of R(x) = y are polynomials in y of degree ≤ k/N (Newton's identities),
/// so m_k is a combination of lower moments.
inline std::vector<double> balanced_moments(const RealPolynomial& R, int count) {
  const int N = R.degree();
  const double lead = R.leading();
  using Poly = std::vector<double>;  // in y
  auto add_scaled = [](Poly& acc, const Poly& p, double s) {
    if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) acc[i] += s * p[i];
  };
  auto mul = [](const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  std::vector<Poly> e(static_cast<std::size_t>(N) + 1);
  for (int i = 1; i <= N; ++i) {
    const double sgn = (i % 2) ? -1.0 : 1.0;
    if (i < N)
      e[static_cast<std::size_t>(i)] = {sgn * R.coeff(N - i) / lead};
    else
      e[static_cast<std::size_t>(i)] = {sgn * R.coeff(0) / lead, -sgn / lead};
  }
  std::vector<Poly> p(static_cast<std::size_t>(count));
  std::vector<double> m(static_cast<std::size_t>(count), 0.0);
  if (count > 0) m[0] = 1.0;
  for (int k = 1; k < count; ++k) {
    Poly pk{0.0};
    for (int i = 1; i <= std::min(k - 1, N); ++i) {
      const double sgn = (i % 2) ? 1.0 : -1.0;
      add_scaled(pk, mul(e[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(k - i)]), sgn);
    }
    if (k <= N) add_scaled(pk, e[static_cast<std::size_t>(k)], ((k % 2) ? 1.0 : -1.0) * k);
    p[static_cast<std::size_t>(k)] = pk;
    double s = 0.0;
    for (std::size_t j = 0; j < pk.size(); ++j) {
      if (static_cast<int>(j) >= k) {
        if (pk[j] != 0.0) throw ContractError("balanced_moments: moment recursion is not triangular");
        continue;
      }
      s += pk[j] * m[j];
    }
    m[static_cast<std::size_t>(k)] = s / N;
  }
  return m;
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// R(center + h t) = Σ b_k t^k.
inline RealPolynomial affine_conjugate(const RealPolynomial& R, double center, double h) {
  std::vector<double> a(R.coeffs().begin(), R.coeffs().end());
  const std::size_t n = a.size();
  // Taylor shift by repeated synthetic division.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = n - 1; j > k; --j) a[j - 1] += center * a[j];
  double hk = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    a[k] *= hk;
    hk *= h;
  }
  a[0] -= center;
  for (double& x : a) x /= h;
  return RealPolynomial(std::move(a));
}

// Chebyshev algorithm: recurrence coefficients from ordinary moments.
inline void chebyshev_algorithm(const std::vector<double>& mu, int n, std::vector<double>& alpha, std::vector<double>& beta) {
  const int L = 2 * n;
  std::vector<double> sig_prev(static_cast<std::size_t>(L), 0.0), sig(mu.begin(), mu.begin() + L);
  alpha.assign(static_cast<std::size_t>(n), 0.0);
  beta.assign(static_cast<std::size_t>(n), 0.0);
  alpha[0] = mu[1] / mu[0];
  beta[0] = mu[0];
  for (int k = 1; k < n; ++k) {
    std::vector<double> s_new(static_cast<std::size_t>(L), 0.0);
    for (int l = k; l < L - k; ++l)
      s_new[static_cast<std::size_t>(l)] = sig[static_cast<std::size_t>(l) + 1] - alpha[static_cast<std::size_t>(k) - 1] * sig[static_cast<std::size_t>(l)] -
                                           beta[static_cast<std::size_t>(k) - 1] * sig_prev[static_cast<std::size_t>(l)];
    alpha[static_cast<std::size_t>(k)] = s_new[static_cast<std::size_t>(k) + 1] / s_new[static_cast<std::size_t>(k)] -
                                         sig[static_cast<std::size_t>(k)] / sig[static_cast<std::size_t>(k) - 1];
    beta[static_cast<std::size_t>(k)] = s_new[static_cast<std::size_t>(k)] / sig[static_cast<std::size_t>(k) - 1];
    sig_prev = sig;
    sig = s_new;
  }
}

}  // namespace detail

/// n-point Gauss rule for κ (exact for polynomials of degree < 2n up to rounding).
/// Built on the hull mapped to [-1,1] to keep the moment problem well conditioned.
inline GaussRule balanced_gauss_rule(const BranchSystem& bs, int n) {
  if (n < 1 || n > 12) throw ArgumentError("balanced_gauss_rule: n must be in [1,12]");
  const double center = 0.5 * bs.hull.hi, h = 0.5 * bs.hull.hi;
  const RealPolynomial Rhat = detail::affine_conjugate(bs.poly, center, h);
  const std::vector<double> mu = balanced_moments(Rhat, 2 * n);
  std::vector<double> alpha, beta;
  detail::chebyshev_algorithm(mu, n, alpha, beta);
  DenseMatrix J(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    J(static_cast<std::size_t>(k), static_cast<std::size_t>(k)) = alpha[static_cast<std::size_t>(k)];
    if (k + 1 < n) {
      if (!(beta[static_cast<std::size_t>(k) + 1] > 0.0)) throw ConvergenceError("balanced_gauss_rule: moment problem breakdown");
      const double off = std::sqrt(beta[static_cast<std::size_t>(k) + 1]);
      J(static_cast<std::size_t>(k), static_cast<std::size_t>(k) + 1) = off;
      J(static_cast<std::size_t>(k) + 1, static_cast<std::size_t>(k)) = off;
    }
  }
  const EigenDecomposition ed = jacobi_eigen(J, true, 1e-15);
  GaussRule g;
  for (int k = 0; k < n; ++k) {
    const double v0 = ed.vectors(0, static_cast<std::size_t>(k));
    g.nodes.push_back(std::clamp(center + h * ed.values[static_cast<std::size_t>(k)], 0.0, bs.hull.hi));
    g.weights.push_back(mu[0] * v0 * v0);
  }
  return g;
}

/// Cylinder-Gauss nodes: the Gauss rule for κ pulled back through every word of
/// the given depth (or only W_depth^+), each cylinder weighted N^{-depth}.
inline std::vector<MeasureNode> cylinder_gauss_nodes(const BranchSystem& bs, int depth, int n_gauss, bool restrict_plus) {
  if (depth < 0) throw ArgumentError("cylinder_gauss_nodes: depth must be >= 0");
  const GaussRule g = balanced_gauss_rule(bs, n_gauss);
  const double cyl_w = std::pow(static_cast<double>(bs.N), -depth);
  std::vector<MeasureNode> out;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    std::vector<double> level{g.nodes[i]};
    for (int m = 1; m <= depth; ++m) level = preimage_level(bs, level);
    const std::size_t start = (restrict_plus && depth > 0) ? level.size() / static_cast<std::size_t>(bs.N) : 0;
    for (std::size_t k = start; k < level.size(); ++k) out.push_back({level[k], cyl_w * g.weights[i]});
  }
  return out;
}

}  // namespace fzeta
