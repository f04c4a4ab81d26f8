#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stratmc/directions.hpp"
#include "stratmc/estimators.hpp"
#include "stratmc/models.hpp"
#include "stratmc/payoffs.hpp"

namespace stratmc {

enum class ModelKind { Bs, Cir };

enum class Method { La, Lt, Pca, PilotPca, LaPca, LtPca, TwoDirLa, TwoDirLt, TwoDirPca };

enum class OutputFormat { Csv, Json };

enum class TimingMode {
  /// Wall-clock ratio against the Monte Carlo row of the same cell.
  Wall,
  /// Leave time_ratio empty so output is byte-for-byte reproducible.
  None,
};

std::string_view to_string(Method m) noexcept;
std::string_view to_string(AllocationRule a) noexcept;
std::string_view to_string(OutputFormat f) noexcept;
Method parse_method(std::string_view name);
AllocationRule parse_allocation(std::string_view name);
OutputFormat parse_format(std::string_view name);
TimingMode parse_timing(std::string_view name);

/// True for methods that stratify along two directions.
bool is_two_direction(Method m) noexcept;

struct ExperimentConfig {
  ModelKind model = ModelKind::Bs;
  BsParams bs;
  CirParams cir;

  PayoffKind payoff = PayoffKind::AsianBasket;
  std::vector<double> strikes;
  std::optional<double> barrier;

  std::vector<Method> methods;
  std::vector<AllocationRule> allocations{AllocationRule::Constant, AllocationRule::Optimal};
  std::size_t samples = 100000;
  /// Strata of one-direction methods.
  int strata = 100;
  /// Intervals per direction for two-direction methods.
  int strata_2d = 32;
  double pilot_fraction = 0.1;
  std::size_t pilot_paths = kDefaultPilotPaths;
  PilotMapping pilot_mapping = PilotMapping::Raw;
  std::uint64_t seed = 1;
  bool lhs = false;
  std::size_t lhs_replications = 30;
  unsigned threads = 1;

  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  TimingMode timing = TimingMode::Wall;

  /// Throws ConfigInvalid naming the offending field.
  void validate() const;
};

/// Parses the INI grammar described in the README.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path);

}  // namespace stratmc
