#pragma once

#include <iosfwd>

namespace dtph::cli {

/// Process exit codes of the `dtph` tool.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,      // a requested verification did not pass
  kParseError = 2,       // malformed JSON/CSV or command line
  kDimensionError = 3,   // inconsistent shapes or port widths
  kStepFailure = 4,      // NonUnique / Inconsistent step, inconsistent x0
  kCouplingError = 5,    // CouplingSingular, NonContractiveCoupling, NonCausal
  kNumericalError = 6,   // NotFound, NotPositiveDefinite, IndexTooHigh, ...
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dtph::cli
