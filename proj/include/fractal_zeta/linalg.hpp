#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "fractal_zeta/errors.hpp"

namespace fzeta {

/// Dense square matrix, row-major.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t size) : n(size), a(size * size, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  double max_asymmetry() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
  }
  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k belongs to values[k]; empty unless requested
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix. Stops when the off-diagonal
/// Frobenius norm drops below rel_tol times the Frobenius norm of the input.
inline EigenDecomposition jacobi_eigen(DenseMatrix A, bool want_vectors, double rel_tol = 1e-13) {
  const std::size_t n = A.n;
  EigenDecomposition out;
  DenseMatrix V;
  if (want_vectors) {
    V = DenseMatrix(n);
    for (std::size_t i = 0; i < n; ++i) V(i, i) = 1.0;
  }
  double scale2 = 0.0;
  for (double x : A.a) scale2 += x * x;
  const double target2 = rel_tol * rel_tol * scale2;

  auto off2 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * A(i, j) * A(i, j);
    return s;
  };

  int sweep = 0;
  for (; sweep < 100 && scale2 > 0.0; ++sweep) {
    if (off2() <= target2) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double app = A(p, p), aqq = A(q, q);
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        if (want_vectors)
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = V(k, p), vkq = V(k, q);
            V(k, p) = c * vkp - s * vkq;
            V(k, q) = s * vkp + c * vkq;
          }
      }
    }
  }
  if (sweep == 100 && off2() > target2) throw ConvergenceError("jacobi_eigen: no convergence in 100 sweeps");
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return A(i, i) < A(j, j); });
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = A(order[k], order[k]);
  if (want_vectors) {
    out.vectors = DenseMatrix(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = V(i, order[k]);
  }
  return out;
}

struct EigenCluster {
  double value;
  int multiplicity;
};

/// Groups ascending values whose consecutive gaps are at most tol.
inline std::vector<EigenCluster> cluster_values(const std::vector<double>& ascending, double tol) {
  std::vector<EigenCluster> out;
  std::size_t i = 0;
  while (i < ascending.size()) {
    std::size_t j = i + 1;
    double sum = ascending[i];
    while (j < ascending.size() && ascending[j] - ascending[j - 1] <= tol) sum += ascending[j++];
    out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }
  return out;
}

}  // namespace fzeta
