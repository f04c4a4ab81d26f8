#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stratmc {

enum class ErrorCode {
  // linear algebra
  NotPositiveDefinite,
  NonIncreasingGrid,
  RankDeficient,
  NoConvergence,
  ZeroVector,
  DimensionMismatch,
  // sampling
  OutOfDomain,
  IndexOutOfRange,
  NotOrthogonal,
  EmptyBoundInterval,
  AllZeroSigma,
  InsufficientSamples,
  // directions
  DegenerateGradient,
  DependentDirections,
  DegenerateColumn,
  InvalidFeller,
  NegativePathValue,
  DegenerateCovariance,
  // front end
  ConfigInvalid,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Configuration and I/O problems map to the CLI's "config error" exit code;
/// everything else is a numeric failure.
bool is_config_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stratmc
