#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "stratmc/allocation.hpp"
#include "stratmc/linalg.hpp"
#include "stratmc/sampling.hpp"

namespace stratmc {

/// Function of a standard normal driver vector. Must be safe to call from
/// several threads at once; per-call temporaries go into `scratch`.
class Integrand {
 public:
  virtual ~Integrand() = default;

  [[nodiscard]] virtual std::size_t dim() const = 0;
  [[nodiscard]] virtual std::size_t scratch_size() const { return 0; }
  virtual double operator()(std::span<const double> z, std::span<double> scratch) const = 0;
};

/// Adapts a plain callable.
class FunctionIntegrand final : public Integrand {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  FunctionIntegrand(std::size_t dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

  [[nodiscard]] std::size_t dim() const override { return dim_; }
  double operator()(std::span<const double> z, std::span<double>) const override {
    return fn_(z);
  }

 private:
  std::size_t dim_;
  Fn fn_;
};

struct ExecutionOptions {
  std::uint64_t seed = 0;
  /// Separates the substreams of different runs sharing one seed.
  std::uint64_t phase = 0;
  /// Worker count, 0 for hardware concurrency. Never changes results.
  unsigned threads = 1;
};

struct StratumStats {
  std::size_t n = 0;
  double mean = 0.0;   // mean of weight * g
  double sd = 0.0;     // sample standard deviation of weight * g
  double scale = 0.0;  // p_k, or 1 for weighted draws
  double mean_weight = 0.0;
};

struct EstimateReport {
  double price = 0.0;
  /// Variance of the estimator itself.
  double variance = 0.0;
  std::vector<StratumStats> strata;
  double seconds = 0.0;
  /// Draws that enter the estimate.
  std::size_t n_samples = 0;
  /// Extra draws spent on a pilot stage (not part of the estimate).
  std::size_t pilot_samples = 0;
  std::size_t n_strata = 1;

  /// Variance scaled to one draw, comparable with a plain Monte Carlo sample variance.
  [[nodiscard]] double per_draw_variance() const {
    return variance * static_cast<double>(n_samples);
  }
  [[nodiscard]] double standard_error() const;
};

/// Runs counts[k] conditional draws in every stratum k.
/// Unweighted samplers: price = sum_k p_k mean_k(g), variance sum_k p_k^2 s_k^2 / n_k.
/// Weighted samplers: price = sum_k mean_k(weight * g) with no p_k factor.
EstimateReport stratified_estimate(const Integrand& g, const StratumSampler& sampler,
                                   std::span<const std::size_t> counts,
                                   const ExecutionOptions& exec);

EstimateReport plain_mc_estimate(const Integrand& g, std::size_t n, const ExecutionOptions& exec);

/// Evaluates g on rotation * (LHS normal row) in `replications` independent
/// batches of n / replications rows; the variance comes from the spread of
/// the batch means.
EstimateReport lhs_estimate(const Integrand& g, const linalg::Matrix& rotation, std::size_t n,
                            std::size_t replications, const ExecutionOptions& exec);

enum class AllocationRule { Constant, Optimal };

struct StratifiedRunOptions {
  AllocationRule rule = AllocationRule::Optimal;
  std::size_t total = 100000;
  /// Share of `total` spent on the pilot run of the optimal rule.
  double pilot_fraction = 0.1;
  std::size_t min_per_stratum = kMinPerStratum;
  ExecutionOptions exec;
};

/// Constant rule: equal counts in every stratum. Optimal rule: a pilot with
/// equal counts estimates sigma_k, then the remaining budget follows the
/// optimal allocation and only those draws form the estimate. For weighted
/// samplers the nominal stratum probabilities are uniform and strata whose
/// pilot weights were all zero receive no draws.
EstimateReport run_stratified(const Integrand& g, const StratumSampler& sampler,
                              const StratifiedRunOptions& options);

}  // namespace stratmc
