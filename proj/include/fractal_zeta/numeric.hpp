#pragma once

#include <cmath>
#include <complex>

namespace fzeta {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEps = 2.220446049250313e-16;

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
    abs_ += std::abs(z);
  }
  cplx value() const { return {re_.value(), im_.value()}; }
  /// Sum of moduli of the added terms, a scale for rounding estimates.
  double abs_sum() const { return abs_; }

 private:
  CompensatedSum re_, im_;
  double abs_ = 0.0;
};

/// exp(-s/2 * log_x), i.e. x^{-s/2} given log x.
inline cplx neg_half_power_from_log(cplx s, double log_x) { return std::exp(-0.5 * s * log_x); }

}  // namespace fzeta
