#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stratmc/linalg.hpp"

namespace stratmc {

struct AllocationPlan {
  linalg::Vector probabilities;      // p_k
  linalg::Vector fractions;          // q_k, sums to 1
  std::vector<std::size_t> counts;   // n_k, sums to total
  std::size_t total = 0;

  [[nodiscard]] std::size_t strata() const noexcept { return counts.size(); }
};

inline constexpr std::size_t kMinPerStratum = 2;

/// q_k proportional to p_k * sigma_k, rounded by largest remainder. Strata with
/// p_k > 0 get at least `min_per_stratum` draws, strata with p_k = 0 get none.
/// Throws AllZeroSigma when every sigma_k of a reachable stratum is 0.
AllocationPlan optimal_allocation(std::span<const double> p, std::span<const double> sigma_hat,
                                  std::size_t total,
                                  std::size_t min_per_stratum = kMinPerStratum);

/// q_k = p_k / sum(p).
AllocationPlan proportional_allocation(std::span<const double> p, std::size_t total,
                                       std::size_t min_per_stratum = kMinPerStratum);

/// Same count in every stratum (the "const" rule). Probabilities are uniform.
AllocationPlan equal_allocation(std::size_t strata, std::size_t total,
                                std::size_t min_per_stratum = kMinPerStratum);

/// sum_k p_k^2 sigma_k^2 / n_k
double stratified_variance(std::span<const double> p, std::span<const double> sigma,
                           std::span<const std::size_t> counts);

/// Per-draw form sum_k p_k^2 sigma_k^2 / q_k; strata with p_k sigma_k = 0 add nothing.
double stratified_variance_fractions(std::span<const double> p, std::span<const double> sigma,
                                     std::span<const double> q);

}  // namespace stratmc
