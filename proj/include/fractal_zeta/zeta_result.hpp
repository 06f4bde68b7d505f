#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fractal_zeta/numeric.hpp"

namespace fzeta {

enum class Method { direct, continued, closed_form, quadrature, euler_maclaurin };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::continued: return "continued";
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::euler_maclaurin: return "euler_maclaurin";
  }
  return "unknown";
}

struct ZetaResult {
  cplx value{0.0, 0.0};
  double abs_error = 0.0;
  Method method = Method::direct;
  long terms_used = 0;
  std::vector<std::pair<std::string, std::string>> meta;  // ordered free-form annotations
};

/// {base_re + i k imag_period : k ∈ Z}; imag_period = 0 marks an isolated point.
struct PoleLattice {
  double base_re = 0.0;
  double imag_period = 0.0;
  std::string label;
  bool canceled = false;

  bool isolated() const { return imag_period == 0.0; }
  /// Distance from s to the nearest lattice point.
  double distance(cplx s) const {
    if (isolated()) return std::abs(s - cplx(base_re, 0.0));
    const double k = std::round(s.imag() / imag_period);
    return std::abs(s - cplx(base_re, k * imag_period));
  }
};

}  // namespace fzeta
