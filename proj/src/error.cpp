#include "qsl/error.hpp"

namespace qsl {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidMeasurement: return "InvalidMeasurement";
    case ErrorCode::NotRank1PVM: return "NotRank1PVM";
    case ErrorCode::BadFactorization: return "BadFactorization";
    case ErrorCode::NegativeBeta: return "NegativeBeta";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::SingularNormalizer: return "SingularNormalizer";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::NotQubit: return "NotQubit";
    case ErrorCode::OutsideBall: return "OutsideBall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::MissingSeed: return "MissingSeed";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace qsl
