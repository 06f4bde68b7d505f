#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fzeta {

/// Error categories. The CLI maps every kind except `usage` to exit code 2.
enum class ErrorKind {
  domain,
  argument,
  convergence,
  pole,
  out_of_strip,
  resource,
  completeness,
  contract,
  validation,
  usage
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::argument: return "argument";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::pole: return "pole";
    case ErrorKind::out_of_strip: return "out_of_strip";
    case ErrorKind::resource: return "resource";
    case ErrorKind::completeness: return "completeness";
    case ErrorKind::contract: return "contract";
    case ErrorKind::validation: return "validation";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorKind::argument, w) {}
};
struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& w) : Error(ErrorKind::convergence, w) {}
};
struct OutOfStripError : Error {
  explicit OutOfStripError(const std::string& w) : Error(ErrorKind::out_of_strip, w) {}
};
struct CompletenessError : Error {
  explicit CompletenessError(const std::string& w) : Error(ErrorKind::completeness, w) {}
};
struct ContractError : Error {
  explicit ContractError(const std::string& w) : Error(ErrorKind::contract, w) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error(ErrorKind::validation, w) {}
};
struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorKind::usage, w) {}
};

/// Raised near a pole. Carries the lattice {base_re + i k period} when one applies.
struct PoleError : Error {
  PoleError(const std::string& w, std::string factor_label, double base = 0.0, double period = 0.0)
      : Error(ErrorKind::pole, w), factor(std::move(factor_label)), base_re(base), imag_period(period) {}
  std::string factor;
  double base_re;
  double imag_period;
};

/// Raised when a node or word budget would be exceeded. `reachable` is the best
/// value attainable within budget (a cutoff Λ or an error bound, per call site).
struct ResourceError : Error {
  ResourceError(const std::string& w, double reach) : Error(ErrorKind::resource, w), reachable(reach) {}
  double reachable;
};

}  // namespace fzeta
