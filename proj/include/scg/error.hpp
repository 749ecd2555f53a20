#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scg {

enum class ErrorKind {
  kPriorNotNormalized,
  kCostNotMonotone,
  kEmptyActionSet,
  kNegativeCost,
  kDimensionMismatch,
  kInvalidAction,
  kSizeGuard,
  kMaxRoundsExceeded,
  kInfeasibleMarginals,
  kDegenerateConfiguration,
  kNumericalFailure,
  kInvalidScheme,
  kInvalidParams,
  kNonIntegerAgentCount,
  kGraphInvariantViolated,
  kClassSizeMismatch,
  kParseError,
  kSchemaError,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as scg::Error; kind() is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace scg
