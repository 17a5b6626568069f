#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seamloc {

enum class ErrorCategory {
  kInvalidParameter,
  kInvalidInput,
  kInvalidScript,
  kParse,
  kInvariantViolation,
  kFilterDivergence,
  kStateInconsistency,
  kIo,
};

std::string_view to_string(ErrorCategory category);

// Every failure raised by the library carries a category so the CLI can map
// it to a distinct exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class FilterDivergence : public Error {
 public:
  explicit FilterDivergence(const std::string& what)
      : Error(ErrorCategory::kFilterDivergence, what) {}
};

// Raised by track() when the particle filter diverges and the divergence
// policy says to fail; carries the offending step.
class TrackError : public Error {
 public:
  TrackError(std::size_t step_index, const std::string& what)
      : Error(ErrorCategory::kFilterDivergence,
              "step " + std::to_string(step_index) + ": " + what),
        step_index_(step_index) {}

  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

}  // namespace seamloc
