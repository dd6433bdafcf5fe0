#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtph {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  NotPositiveDefinite,
  Inconsistent,
  NonUnique,
  NotAGraph,
  ZeroParameter,
  SingularPencil,
  IndexTooHigh,
  InconsistentInitialState,
  NonUniqueStep,
  InconsistentStep,
  NotFound,
  NotScatteringPH,
  NotMonotone,
  NotLagrangian,
  NotContractive,
  PortMismatch,
  NonContractiveCoupling,
  CouplingSingular,
  NotIdentityE,
  FeedbackSingular,
  NonCausal,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The message carries the diagnostic;
/// `kind()` is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dtph
