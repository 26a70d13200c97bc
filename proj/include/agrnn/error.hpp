#pragma once

#include <stdexcept>
#include <string>

namespace agrnn {

enum class ErrorKind {
  InvalidConfig,
  UnsupportedDerivative,
  DegenerateSpace,
  SingularSystem,
  ZeroSignal,
  DivisionByZero,
  DegenerateRange,
  EmptySegment,
  SolverFailure,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception. Every failure mode named by a module contract maps
/// onto one ErrorKind so callers can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::UnsupportedDerivative: return "unsupported-derivative";
    case ErrorKind::DegenerateSpace: return "degenerate-space";
    case ErrorKind::SingularSystem: return "singular-system";
    case ErrorKind::ZeroSignal: return "zero-signal";
    case ErrorKind::DivisionByZero: return "division-by-zero";
    case ErrorKind::DegenerateRange: return "degenerate-range";
    case ErrorKind::EmptySegment: return "empty-segment";
    case ErrorKind::SolverFailure: return "solver-failure";
  }
  return "error";
}

}  // namespace agrnn
