#ifndef SUBSQ_ERRORS_HPP
#define SUBSQ_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace subsq {

enum class ErrorCode {
  EmptyOperand,
  DivisionByZeroInterval,
  InfiniteBound,
  InvalidBounds,
  ShapeMismatch,
  SingularMatrix,
  SingularMidpoint,
  NotContracting,
  DiagonalContainsZero,
  InvalidOverlap,
  BudgetExceeded,
  AllSubsquaresInconclusive,
  DimensionCap,
  NumericalFailure,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyOperand: return "EmptyOperand";
    case ErrorCode::DivisionByZeroInterval: return "DivisionByZeroInterval";
    case ErrorCode::InfiniteBound: return "InfiniteBound";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularMidpoint: return "SingularMidpoint";
    case ErrorCode::NotContracting: return "NotContracting";
    case ErrorCode::DiagonalContainsZero: return "DiagonalContainsZero";
    case ErrorCode::InvalidOverlap: return "InvalidOverlap";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::AllSubsquaresInconclusive: return "AllSubsquaresInconclusive";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace subsq

#endif  // SUBSQ_ERRORS_HPP
