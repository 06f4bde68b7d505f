#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/numeric.hpp"
#include "fractal_zeta/zeta_result.hpp"

namespace fzeta {

/// Riemann zeta by Euler–Maclaurin summation with Bernoulli corrections
/// through B_12. The cutoff starts at 50 and grows until the remainder bound
/// is below 1e-12 (only needed for large |Im s|).
inline ZetaResult riemann_reference(cplx s) {
  if (s == cplx(1.0, 0.0)) throw PoleError("riemann_reference: pole at s = 1", "riemann", 1.0, 0.0);
  if (!(s.real() > -2.0)) throw DomainError("riemann_reference: requires Re(s) > -2");

  // B_{2k} / (2k)! for k = 1..6, and B_14 / 14! for the remainder.
  static constexpr std::array<double, 6> b_over_fact = {
      1.0 / 6.0 / 2.0,
      -1.0 / 30.0 / 24.0,
      1.0 / 42.0 / 720.0,
      -1.0 / 30.0 / 40320.0,
      5.0 / 66.0 / 3628800.0,
      -691.0 / 2730.0 / 479001600.0,
  };
  const double b14_over_fact = (7.0 / 6.0) / 87178291200.0;
  const double sigma = s.real();

  auto remainder = [&](int M) {
    cplx poch = 1.0;
    for (int k = 0; k < 13; ++k) poch *= (s + static_cast<double>(k));
    return std::abs(poch) * b14_over_fact * std::pow(static_cast<double>(M), -sigma - 13.0) / (sigma + 13.0);
  };
  int M = 50;
  while (remainder(M) > 1e-12 && M < 100000) M *= 2;

  ComplexCompensatedSum sum;
  for (int n = 1; n < M; ++n) sum.add(std::exp(-s * std::log(static_cast<double>(n))));
  const double logM = std::log(static_cast<double>(M));
  const cplx Ms = std::exp(-s * logM);  // M^{-s}
  sum.add(static_cast<double>(M) * Ms / (s - 1.0));
  sum.add(0.5 * Ms);
  cplx poch = s;  // (s)_{2k-1}
  double Mpow = 1.0 / M;
  for (int k = 0; k < 6; ++k) {
    sum.add(b_over_fact[static_cast<std::size_t>(k)] * poch * Ms * Mpow);
    poch *= (s + static_cast<double>(2 * k + 1)) * (s + static_cast<double>(2 * k + 2));
    Mpow /= static_cast<double>(M) * M;
  }
  ZetaResult r;
  r.value = sum.value();
  r.abs_error = remainder(M) + 8.0 * kEps * sum.abs_sum();
  r.method = Method::euler_maclaurin;
  r.terms_used = M;
  return r;
}

}  // namespace fzeta
