#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stratmc/config.hpp"
#include "stratmc/table.hpp"

namespace stratmc {

/// Stratification directions of one method together with the time spent
/// computing them.
struct MethodDirections {
  Method method;
  DirectionSet directions;
  double seconds = 0.0;
};

/// Model, payoffs and cached directions of one configuration.
class ExperimentContext {
 public:
  explicit ExperimentContext(ExperimentConfig config);
  ~ExperimentContext();
  ExperimentContext(const ExperimentContext&) = delete;
  ExperimentContext& operator=(const ExperimentContext&) = delete;

  [[nodiscard]] const ExperimentConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::size_t dim() const;

  /// Directions for `method`, computed on first use.
  const MethodDirections& directions(Method method);
  /// Full orthogonal rotation used by the LHS estimator (all LT columns).
  const linalg::Matrix& lhs_rotation();
  /// Discounted payoff at `strike` as a function of the drivers.
  [[nodiscard]] std::unique_ptr<Integrand> integrand(double strike) const;

  /// One table row. `method` empty means the Monte Carlo baseline.
  ResultRow run_cell(std::optional<Method> method, AllocationRule alloc, std::size_t strike_index,
                     double* seconds = nullptr);
  ResultRow run_lhs(std::size_t strike_index, double* seconds = nullptr);

 private:
  ResultRow base_row(std::size_t strike_index) const;

  ExperimentConfig config_;
  std::unique_ptr<BsModel> bs_;
  std::vector<std::unique_ptr<MethodDirections>> cache_;
  std::optional<linalg::Matrix> rotation_;
};

/// Every (strike, method, allocation) cell plus the Monte Carlo baseline and,
/// when enabled, the LHS row. Deterministic for a fixed seed and independent of
/// the thread count. Numeric errors are rethrown with the failing cell named.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

}  // namespace stratmc
