#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/numeric.hpp"
#include "fractal_zeta/polynomial.hpp"

namespace fzeta {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

enum class Monotonicity { increasing, decreasing };

struct Branch {
  Interval domain;  // I_j
  Monotonicity direction;
  Interval range;  // R(I_j)
};

/// Sequence of 1-based branch indices; the inverse orbit applies the last index first.
struct Word {
  std::vector<int> indices;

  std::size_t length() const { return indices.size(); }
  bool is_plus() const { return indices.empty() || indices.front() != 1; }
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(indices[i]);
    }
    return s;
  }
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (a.indices.size() != b.indices.size()) return a.indices.size() <=> b.indices.size();
    return a.indices <=> b.indices;
  }
};

struct MeasureNode {
  double point;
  double weight;
};

/// Decimation polynomial with its monotone inverse branches on the hull [0,b]
/// and the constants used by the zeta machinery.
struct BranchSystem {
  RealPolynomial poly;
  int N = 0;
  double c = 0.0;
  Interval hull;
  std::vector<Branch> branches;
  Interval i0;
  std::vector<Interval> first_level;  // R_j^{-1}(hull), j = 1..N
  double d_R = 0.0;
  bool totally_disconnected = false;
  double r = 0.0;        // |R'|^{-1} surrogate; infinite when a preimage endpoint is critical
  double epsilon = 0.0;  // strip width of the continuation
  double kappa_mean = 0.0;

  // Fatou linearizer data.
  double fatou_zstar = 0.0;  // R_1^{-2}(sup I_0); the K constant is valid below it
  double fatou_K = 0.0;
  std::vector<double> koenigs;  // Taylor coefficients of the linearizer at 0, koenigs[1] = 1
  double koenigs_threshold = 0.0;
  double fatou_min = 0.0;  // linearizer at the left endpoint of I_2

  double slack() const { return 1e-12 * std::max(1.0, hull.hi); }
};

namespace detail {

inline double max_abs_on(const RealPolynomial& p, double a, double b) {
  double m = std::max(std::abs(p(a)), std::abs(p(b)));
  for (double x : real_roots(p.derivative(), a, b)) m = std::max(m, std::abs(p(x)));
  return m;
}

inline double min_on(const RealPolynomial& p, double a, double b) {
  double m = std::min(p(a), p(b));
  for (double x : real_roots(p.derivative(), a, b)) m = std::min(m, p(x));
  return m;
}

// Safeguarded Newton on R(z) = w inside the monotone bracket [a,b].
inline double solve_monotone(const RealPolynomial& R, double a, double b, bool increasing, double w, double guess) {
  double lo = a, hi = b;  // f(lo) <= 0 <= f(hi) after orientation
  auto f = [&](double z) {
    const auto [v, d] = R.value_and_derivative(z);
    return std::pair<double, double>{increasing ? v - w : w - v, increasing ? d : -d};
  };
  if (f(lo).first >= 0.0) return lo;
  if (f(hi).first <= 0.0) return hi;
  double z = std::clamp(guess, lo, hi);
  double dx_old = hi - lo;
  for (int it = 0; it < 200; ++it) {
    const auto [fz, dz] = f(z);
    if (fz == 0.0) return z;
    if (fz < 0.0) lo = z; else hi = z;
    double znew;
    const bool newton_ok = dz > 0.0 && std::abs(2.0 * fz) < std::abs(dx_old * dz);
    if (newton_ok) {
      znew = z - fz / dz;
      if (!(znew > lo && znew < hi)) znew = 0.5 * (lo + hi);
    } else {
      znew = 0.5 * (lo + hi);
    }
    dx_old = std::abs(znew - z);
    const double tol = 2.0 * kEps * std::abs(znew);
    z = znew;
    if (dx_old <= tol || hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return z;
}

}  // namespace detail

/// Solves R(z) = w on branch j (1-based). Throws DomainError if w is not in R(I_j).
inline double branch_preimage(const BranchSystem& bs, int j, double w) {
  if (j < 1 || j > bs.N) throw ArgumentError("branch index " + std::to_string(j) + " out of range");
  const Branch& br = bs.branches[static_cast<std::size_t>(j - 1)];
  const double slack = bs.slack() * std::max(1.0, std::abs(w));
  if (!(w >= br.range.lo - slack && w <= br.range.hi + slack))
    throw DomainError("w = " + std::to_string(w) + " outside R(I_" + std::to_string(j) + ")");
  w = std::clamp(w, br.range.lo, br.range.hi);
  const bool inc = br.direction == Monotonicity::increasing;
  const double a = br.domain.lo, b = br.domain.hi;
  double guess;
  if (j == 1) {
    guess = w / bs.c;
  } else {
    const double ra = bs.poly(a), rb = bs.poly(b);
    guess = (rb != ra) ? a + (w - ra) / (rb - ra) * (b - a) : 0.5 * (a + b);
  }
  return detail::solve_monotone(bs.poly, a, b, inc, w, guess);
}

/// R_w^{-m}(z0): branch inverses composed right to left.
inline double inverse_orbit(const BranchSystem& bs, const Word& word, double z0) {
  double x = z0;
  for (std::size_t k = word.indices.size(); k-- > 0;) {
    try {
      x = branch_preimage(bs, word.indices[k], x);
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at word position " + std::to_string(k + 1));
    }
  }
  return x;
}

/// Next level of a backward tree: out[j*P + i] = R_{j+1}^{-1}(prev[i]).
inline std::vector<double> preimage_level(const BranchSystem& bs, std::span<const double> prev) {
  const std::size_t P = prev.size();
  std::vector<double> out(P * static_cast<std::size_t>(bs.N));
  for (int j = 0; j < bs.N; ++j)
    for (std::size_t i = 0; i < P; ++i) out[static_cast<std::size_t>(j) * P + i] = branch_preimage(bs, j + 1, prev[i]);
  return out;
}

/// Linearizer by plain iteration with the K-based stopping rule.
inline double fatou(const BranchSystem& bs, double z, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("fatou: tol must be positive");
  if (!bs.i0.contains(z, bs.slack())) throw DomainError("fatou: z = " + std::to_string(z) + " outside I_0");
  if (z <= 0.0) return 0.0;
  const double damp = 1.0 - 1.0 / bs.c;
  double scale = 1.0;
  for (int n = 0; n < 5000; ++n) {
    if (z <= bs.fatou_zstar && bs.fatou_K * z / damp < tol) return scale * z;
    z = branch_preimage(bs, 1, z);
    scale *= bs.c;
  }
  throw ConvergenceError("fatou: iteration limit reached");
}

/// log of the linearizer using the Koenigs series near 0; relative accuracy ~1e-14.
inline double log_fatou_fast(const BranchSystem& bs, double z) {
  if (!bs.i0.contains(z, bs.slack())) throw DomainError("fatou: z = " + std::to_string(z) + " outside I_0");
  if (z <= 0.0) return -std::numeric_limits<double>::infinity();
  int n = 0;
  while (z > bs.koenigs_threshold) {
    z = branch_preimage(bs, 1, z);
    ++n;
  }
  double acc = 0.0;
  for (std::size_t k = bs.koenigs.size(); k-- > 2;) acc = (acc + bs.koenigs[k]) * z;
  return n * std::log(bs.c) + std::log(z) + std::log1p(acc);
}

inline double fatou_fast(const BranchSystem& bs, double z) {
  if (z <= 0.0 && bs.i0.contains(z, bs.slack())) return 0.0;
  return std::exp(log_fatou_fast(bs, z));
}

namespace detail {

inline void build_fatou_data(BranchSystem& bs) {
  bs.fatou_zstar = branch_preimage(bs, 1, branch_preimage(bs, 1, bs.i0.hi));
  const RealPolynomial d1 = bs.poly.derivative();
  const RealPolynomial d2 = d1.derivative();
  const double maxR2 = max_abs_on(d2, 0.0, bs.fatou_zstar);
  const double minR1 = min_on(d1, 0.0, bs.fatou_zstar);
  if (!(minR1 > 0.0)) throw ValidationError("R' not positive near 0");
  bs.fatou_K = maxR2 / (2.0 * bs.c * minR1);

  // Koenigs coefficients from L(R(z)) = c L(z).
  constexpr std::size_t L = 21;
  std::vector<double> a(L, 0.0);
  a[1] = 1.0;
  std::vector<double> rcoef(bs.poly.coeffs().begin(), bs.poly.coeffs().end());
  rcoef.resize(std::min(rcoef.size(), L));
  std::vector<std::vector<double>> pw(L);  // pw[j] = R^j truncated
  pw[1] = rcoef;
  pw[1].resize(L, 0.0);
  for (std::size_t j = 2; j < L; ++j) pw[j] = series_multiply(pw[j - 1], pw[1], L);
  for (std::size_t k = 2; k < L; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j < k; ++j) s += a[j] * pw[j][k];
    a[k] = s / (bs.c - std::pow(bs.c, static_cast<double>(k)));
  }
  bs.koenigs = a;
  // Radius estimate from the tail coefficients; accept |z| where the next
  // term is below rounding.
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t k = L - 4; k < L; ++k)
    if (a[k] != 0.0) rho = std::min(rho, std::pow(std::abs(a[k]), -1.0 / static_cast<double>(k - 1)));
  if (!std::isfinite(rho)) rho = bs.hull.hi;
  const double thr = 0.5 * rho * std::pow(1e-17, 1.0 / static_cast<double>(L - 1));
  bs.koenigs_threshold = std::min(thr, 0.5 * bs.fatou_zstar);
}

}  // namespace detail

inline BranchSystem build_branch_system(const RealPolynomial& poly) {
  if (poly.degree() < 2) throw ArgumentError("polynomial degree must be at least 2");
  for (double a : poly.coeffs())
    if (!std::isfinite(a)) throw ArgumentError("polynomial coefficients must be finite");
  if (poly.coeff(0) != 0.0) throw ArgumentError("R(0) must be 0");
  if (!(poly.coeff(1) > 1.0)) throw ArgumentError("R'(0) must exceed 1");

  BranchSystem bs;
  bs.poly = poly;
  bs.N = poly.degree();
  bs.c = poly.coeff(1);

  double b = 0.0;
  for (double x : real_roots(poly)) b = std::max(b, x);
  for (double x : real_roots(poly - RealPolynomial::identity())) b = std::max(b, x);
  if (!(b > 0.0)) throw ValidationError("no positive hull endpoint; Julia set not in R+");
  bs.hull = {0.0, b};
  const double slack = bs.slack();

  const RealPolynomial d1 = poly.derivative();
  std::vector<double> cuts{0.0};
  for (double x : real_roots(d1, 0.0, b))
    if (x > slack && x < b - slack) cuts.push_back(x);
  cuts.push_back(b);
  if (static_cast<int>(cuts.size()) != bs.N + 1)
    throw ValidationError("expected " + std::to_string(bs.N - 1) + " critical points inside the hull, found " +
                          std::to_string(cuts.size() - 2) + "; Julia set not in R+");

  for (int j = 0; j < bs.N; ++j) {
    const double a = cuts[static_cast<std::size_t>(j)], e = cuts[static_cast<std::size_t>(j) + 1];
    const double dmid = d1(0.5 * (a + e));
    if (dmid == 0.0) throw ValidationError("flat branch " + std::to_string(j + 1));
    const bool inc = dmid > 0.0;
    for (int k = 1; k < 32; ++k) {
      const double x = a + (e - a) * k / 32.0;
      const double d = d1(x);
      if ((d > 0.0) != inc && std::abs(d) > 1e-12 * d1.magnitude(x))
        throw ValidationError("R is not monotone on branch " + std::to_string(j + 1));
    }
    const double ra = poly(a), re = poly(e);
    bs.branches.push_back({{a, e}, inc ? Monotonicity::increasing : Monotonicity::decreasing,
                           {std::min(ra, re), std::max(ra, re)}});
  }

  double i0lo = -std::numeric_limits<double>::infinity(), i0hi = std::numeric_limits<double>::infinity();
  for (int j = 0; j < bs.N; ++j) {
    const Interval& rg = bs.branches[static_cast<std::size_t>(j)].range;
    if (rg.lo > slack || rg.hi < b - slack)
      throw ValidationError("R(I_" + std::to_string(j + 1) + ") does not cover [0,b]; R^{-1}([0,b]) not in [0,b]");
    i0lo = std::max(i0lo, rg.lo);
    i0hi = std::min(i0hi, rg.hi);
  }
  bs.i0 = {std::min(i0lo, 0.0), std::max(i0hi, b)};

  bs.d_R = 2.0 * std::log(static_cast<double>(bs.N)) / std::log(bs.c);
  if (!(bs.d_R > 0.0 && bs.d_R < 2.0)) throw ValidationError("d_R must lie in (0,2)");

  for (int j = 1; j <= bs.N; ++j) {
    const double x0 = branch_preimage(bs, j, 0.0), x1 = branch_preimage(bs, j, b);
    bs.first_level.push_back({std::min(x0, x1), std::max(x0, x1)});
  }
  bs.totally_disconnected = true;
  for (int j = 0; j + 1 < bs.N; ++j)
    if (bs.first_level[static_cast<std::size_t>(j) + 1].lo - bs.first_level[static_cast<std::size_t>(j)].hi <= slack)
      bs.totally_disconnected = false;

  bs.r = 0.0;
  for (const Interval& iv : bs.first_level)
    for (double x : {iv.lo, iv.hi}) {
      const double d = std::abs(d1(x));
      bs.r = std::max(bs.r, d > 0.0 ? 1.0 / d : std::numeric_limits<double>::infinity());
    }
  bs.epsilon = (bs.totally_disconnected && bs.r < 1.0) ? -2.0 * std::log(bs.r) / std::log(bs.c) : 0.0;
  bs.kappa_mean = -poly.coeff(bs.N - 1) / (bs.N * poly.leading());

  detail::build_fatou_data(bs);
  bs.fatou_min = fatou_fast(bs, bs.branches[1].domain.lo);
  return bs;
}

/// Points R_w^{-m}(b), weight N^{-m}, for all words of length m (or W_m^+).
inline std::vector<MeasureNode> balanced_nodes(const BranchSystem& bs, int depth, bool restrict_plus) {
  if (depth < 1) throw ArgumentError("balanced_nodes: depth must be >= 1");
  std::vector<double> level{bs.hull.hi};
  for (int m = 1; m <= depth; ++m) level = preimage_level(bs, level);
  const double w = std::pow(static_cast<double>(bs.N), -depth);
  const std::size_t start = restrict_plus ? level.size() / static_cast<std::size_t>(bs.N) : 0;
  std::vector<MeasureNode> nodes;
  nodes.reserve(level.size() - start);
  for (std::size_t i = start; i < level.size(); ++i) nodes.push_back({level[i], w});
  return nodes;
}

}  // namespace fzeta
