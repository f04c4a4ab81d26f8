#include "stratmc/error.hpp"

namespace stratmc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonIncreasingGrid: return "NonIncreasingGrid";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::EmptyBoundInterval: return "EmptyBoundInterval";
    case ErrorCode::AllZeroSigma: return "AllZeroSigma";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::DependentDirections: return "DependentDirections";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::InvalidFeller: return "InvalidFeller";
    case ErrorCode::NegativePathValue: return "NegativePathValue";
    case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) noexcept {
  return code == ErrorCode::ConfigInvalid || code == ErrorCode::IoError;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace stratmc
