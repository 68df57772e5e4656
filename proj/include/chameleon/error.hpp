#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chameleon {

/// Every failure the library reports carries one of these kinds. The CLI maps
/// ParseError to exit code 1 and everything else to exit code 2.
enum class ErrorKind {
  ParseError,
  PreconditionFailed,
  WrongBase,
  ExponentTooSmall,
  NotInvertible,
  NotAPowerRatio,
  InconsistentResidue,
  NotInDelta,
  NotIncreasing,
  NonzeroDn,
  BadCyclicOrder,
  SlopeNotPowerOfN,
  EndpointNotNAdic,
  NotMarkov,
  NotPowerForm,
  ClassMismatch,
  FixedPointsNotVertices,
  NotAVertex,
  BudgetExceeded,
  OddCount,
  NotPL,
  NeutralBranch,
  DivergentCycle,
  DivergentFixedPoint,
  ReconstructionMismatch,
  SlopeNotPowerOfTwo,
  BadLength,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chameleon
