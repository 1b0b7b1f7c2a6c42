#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

enum class ErrorCode {
  NotHermitian,
  NonSquare,
  DimensionMismatch,
  InvalidOrder,
  NonFinite,
  InvalidState,
  InvalidMeasurement,
  NotRank1PVM,
  BadFactorization,
  NegativeBeta,
  BadRank,
  SingularNormalizer,
  NotTracePreserving,
  IndexOutOfRange,
  NotNormalized,
  LengthMismatch,
  BoundaryPoint,
  EmptyTrajectory,
  NotQubit,
  OutsideBall,
  InvalidArgument,
  ParseError,
  UnknownScenario,
  MissingSeed,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every failure carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace qsl
