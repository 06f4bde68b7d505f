#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fractal_zeta/errors.hpp"

namespace fzeta {

/// Real polynomial with coefficients stored in ascending degree.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
  RealPolynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  std::span<const double> coeffs() const { return c_; }
  double coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : 0.0; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Value and first derivative in one Horner pass.
  std::pair<double, double> value_and_derivative(double x) const {
    double p = 0.0, dp = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      dp = dp * x + p;
      p = p * x + *it;
    }
    return {p, dp};
  }

  RealPolynomial derivative() const {
    if (c_.size() <= 1) return RealPolynomial(std::vector<double>{0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return RealPolynomial(std::move(d));
  }

  /// Sum of |a_k| |x|^k, used as a rounding scale for p(x).
  double magnitude(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * std::abs(x) + std::abs(*it);
    return acc;
  }

  friend RealPolynomial operator-(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
    return RealPolynomial(std::move(r));
  }

  friend bool operator==(const RealPolynomial& a, const RealPolynomial& b) { return a.c_ == b.c_; }

  static RealPolynomial identity() { return RealPolynomial({0.0, 1.0}); }

 private:
  void trim() {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

/// Bound on the modulus of every root (Cauchy).
inline double cauchy_root_bound(const RealPolynomial& p) {
  const double lead = std::abs(p.leading());
  double m = 0.0;
  for (int k = 0; k < p.degree(); ++k) m = std::max(m, std::abs(p.coeff(k)) / lead);
  return 1.0 + m;
}

namespace detail {

// Bisection on a bracket with f(a), f(b) of opposite sign; runs until the
// midpoint is no longer representable between the endpoints.
inline double bisect_root(const RealPolynomial& p, double a, double b) {
  double fa = p(a);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= std::min(a, b) || mid >= std::max(a, b)) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// All real roots of p in [lo, hi], ascending. Recursion on the derivative
/// splits the interval into monotone pieces; roots of even multiplicity are
/// detected where a critical value vanishes to rounding.
inline std::vector<double> real_roots(const RealPolynomial& p, double lo, double hi) {
  std::vector<double> roots;
  const int n = p.degree();
  if (n <= 0) return roots;
  if (n == 1) {
    const double x = -p.coeff(0) / p.coeff(1);
    if (x >= lo && x <= hi) roots.push_back(x);
    return roots;
  }
  std::vector<double> pts{lo};
  for (double x : real_roots(p.derivative(), lo, hi))
    if (x > lo && x < hi) pts.push_back(x);
  pts.push_back(hi);

  auto near_zero = [&](double x) { return std::abs(p(x)) <= 64.0 * 2.220446049250313e-16 * p.magnitude(x); };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (near_zero(pts[i])) roots.push_back(pts[i]);
    if (i + 1 == pts.size()) break;
    const double a = pts[i], b = pts[i + 1];
    const double fa = p(a), fb = p(b);
    if (fa != 0.0 && fb != 0.0 && ((fa < 0) != (fb < 0)) && !near_zero(a) && !near_zero(b))
      roots.push_back(detail::bisect_root(p, a, b));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (double r : roots)
    if (out.empty() || r - out.back() > 1e-12 * scale) out.push_back(r);
  return out;
}

inline std::vector<double> real_roots(const RealPolynomial& p) {
  const double b = cauchy_root_bound(p);
  return real_roots(p, -b, b);
}

/// Truncated power-series product, keeping terms of degree < len.
inline std::vector<double> series_multiply(std::span<const double> a, std::span<const double> b, std::size_t len) {
  std::vector<double> r(len, 0.0);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

}  // namespace fzeta
