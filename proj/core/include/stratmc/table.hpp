#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratmc/config.hpp"

namespace stratmc {

struct ResultRow {
  std::string method;
  std::string alloc;
  std::string payoff;
  double strike = 0.0;
  std::optional<double> barrier;
  double price = 0.0;
  /// Per-draw variance: estimator variance times the draws in the estimate.
  double variance = 0.0;
  /// Empty when timing is disabled.
  std::optional<double> time_ratio;
  std::size_t n_samples = 0;
  std::size_t strata = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr const char* kCsvHeader =
    "method,alloc,payoff,strike,barrier,price,variance,time_ratio,n_samples,strata,seed";

std::string to_csv(const std::vector<ResultRow>& rows);
std::string to_json(const std::vector<ResultRow>& rows);
/// Inverse of to_csv. Throws ConfigInvalid on malformed input.
std::vector<ResultRow> parse_csv(const std::string& text);

/// Writes the table to `path`, or to stdout when path is empty or "-".
/// Throws IoError.
void emit_table(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path);

}  // namespace stratmc
