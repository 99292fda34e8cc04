#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entnum {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kZeroVector,
  kNotInSpan,
  kEmptyDictionary,
  kNotNormalized,
  kLinearlyDependent,
  kBudgetExceeded,
  kNonConvergence,
  kInfeasible,
  kNonOrthonormal,
  kPropertyViolation,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries a code plus a readable
// message. Numeric context (residuals, gradient norms) goes in `value`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, double value = 0.0);

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message, double value = 0.0);

inline void require(bool cond, ErrorCode code, const std::string& message) {
  if (!cond) fail(code, message);
}

}  // namespace entnum
