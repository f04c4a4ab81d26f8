#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace stratmc::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20240611;
  unsigned threads = 1;
  /// Path of the stratmc executable, needed by the determinism check. When
  /// empty that check runs the experiment in-process instead.
  std::string cli_path;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult(const Options&)> run;
};

/// The ten acceptance checks at desk scale.
const std::vector<Criterion>& criteria();

/// Runs one criterion, turning exceptions into a failed result.
CriterionResult run_criterion(const Criterion& c, const Options& options);

/// "PASS  3 la-equals-lt-first-direction (0.01 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace stratmc::selftest
