#include "entnum/error.hpp"

namespace entnum {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kZeroVector: return "zero_vector";
    case ErrorCode::kNotInSpan: return "not_in_span";
    case ErrorCode::kEmptyDictionary: return "empty_dictionary";
    case ErrorCode::kNotNormalized: return "not_normalized";
    case ErrorCode::kLinearlyDependent: return "linearly_dependent";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kNonConvergence: return "non_convergence";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kNonOrthonormal: return "non_orthonormal";
    case ErrorCode::kPropertyViolation: return "property_violation";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message, double value)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      value_(value) {}

void fail(ErrorCode code, const std::string& message, double value) {
  throw Error(code, message, value);
}

}  // namespace entnum
