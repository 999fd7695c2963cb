#pragma once

#include <stdexcept>
#include <string>

namespace pdyn {

// All contract violations carry a stable machine-readable code next to the
// human message. Codes used across the library:
//   NegativeIterateOnNonInvertible, DomainViolation, MixedSystemPoints,
//   CapabilityMissing, EmptyRegion, NotPeriodic, PeriodNotPrime,
//   NonInvertibleTwoSided, NonInvertible, NotACover, MeasureSystemMismatch,
//   GapTooSmall, ConnectorNotFound, WindowOverlap, BudgetExceeded,
//   SeparationFailure, TracerUnavailable, NoPeriodicInNeighborhood,
//   NoTransitiveVisit, PreconditionViolation, SchemaViolation, ParseError
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace pdyn
