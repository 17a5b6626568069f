#include "seamloc/error.hpp"

namespace seamloc {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidParameter: return "invalid-parameter";
    case ErrorCategory::kInvalidInput: return "invalid-input";
    case ErrorCategory::kInvalidScript: return "invalid-script";
    case ErrorCategory::kParse: return "parse-error";
    case ErrorCategory::kInvariantViolation: return "invariant-violation";
    case ErrorCategory::kFilterDivergence: return "filter-divergence";
    case ErrorCategory::kStateInconsistency: return "state-inconsistency";
    case ErrorCategory::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace seamloc
