#include "scg/error.hpp"

namespace scg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kPriorNotNormalized: return "PriorNotNormalized";
    case ErrorKind::kCostNotMonotone: return "CostNotMonotone";
    case ErrorKind::kEmptyActionSet: return "EmptyActionSet";
    case ErrorKind::kNegativeCost: return "NegativeCost";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kInvalidAction: return "InvalidAction";
    case ErrorKind::kSizeGuard: return "SizeGuard";
    case ErrorKind::kMaxRoundsExceeded: return "MaxRoundsExceeded";
    case ErrorKind::kInfeasibleMarginals: return "InfeasibleMarginals";
    case ErrorKind::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kInvalidScheme: return "InvalidScheme";
    case ErrorKind::kInvalidParams: return "InvalidParams";
    case ErrorKind::kNonIntegerAgentCount: return "NonIntegerAgentCount";
    case ErrorKind::kGraphInvariantViolated: return "GraphInvariantViolated";
    case ErrorKind::kClassSizeMismatch: return "ClassSizeMismatch";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kSchemaError: return "SchemaError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace scg
