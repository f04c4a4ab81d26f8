#include "stratmc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stratmc/error.hpp"

namespace stratmc {

namespace {

void check_probabilities(std::span<const double> p) {
  if (p.empty()) throw Error(ErrorCode::InsufficientSamples, "no strata");
  double sum = 0.0;
  for (double pk : p) {
    if (!(pk >= 0.0) || !std::isfinite(pk))
      throw Error(ErrorCode::OutOfDomain, "stratum probabilities must be finite and >= 0");
    sum += pk;
  }
  if (sum > 1.0 + 1e-9) throw Error(ErrorCode::OutOfDomain, "stratum probabilities exceed 1");
  if (!(sum > 0.0)) throw Error(ErrorCode::OutOfDomain, "all stratum probabilities are zero");
}

/// Integer counts from target weights. Every eligible stratum keeps at least
/// `floor_n` draws; the rest follows largest-remainder rounding of total * q.
std::vector<std::size_t> round_counts(std::span<const double> q, std::span<const char> eligible,
                                      std::size_t total, std::size_t floor_n) {
  const std::size_t k = q.size();
  const auto n_eligible =
      static_cast<std::size_t>(std::count(eligible.begin(), eligible.end(), char{1}));
  if (total < n_eligible * floor_n)
    throw Error(ErrorCode::InsufficientSamples,
                "total " + std::to_string(total) + " below " + std::to_string(floor_n) +
                    " draws for each of " + std::to_string(n_eligible) + " strata");

  std::vector<std::size_t> n(k, 0);
  std::vector<double> remainder(k, -1.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double target = q[i] * static_cast<double>(total);
    n[i] = static_cast<std::size_t>(std::floor(target));
    remainder[i] = target - static_cast<double>(n[i]);
    assigned += n[i];
  }
  // Floating-point floors can overshoot by a unit in pathological cases.
  while (assigned > total) {
    const auto it = std::max_element(n.begin(), n.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % k) {
    if (!eligible[order[i]]) continue;
    ++n[order[i]];
    ++assigned;
  }

  // Lift starved strata to the floor, taking draws from the largest ones.
  for (std::size_t i = 0; i < k; ++i) {
    if (!eligible[i]) continue;
    while (n[i] < floor_n) {
      std::size_t donor = k;
      for (std::size_t j = 0; j < k; ++j)
        if (n[j] > floor_n && (donor == k || n[j] > n[donor])) donor = j;
      --n[donor];
      ++n[i];
    }
  }
  return n;
}

AllocationPlan make_plan(std::span<const double> p, std::vector<double> weight, std::size_t total,
                         std::size_t min_per_stratum) {
  const double sum = std::accumulate(weight.begin(), weight.end(), 0.0);
  AllocationPlan plan;
  plan.probabilities.assign(p.begin(), p.end());
  plan.fractions.resize(weight.size());
  for (std::size_t i = 0; i < weight.size(); ++i) plan.fractions[i] = weight[i] / sum;
  std::vector<char> eligible(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) eligible[i] = p[i] > 0.0 ? 1 : 0;
  plan.counts = round_counts(plan.fractions, eligible, total, min_per_stratum);
  plan.total = total;
  return plan;
}

}  // namespace

AllocationPlan optimal_allocation(std::span<const double> p, std::span<const double> sigma_hat,
                                  std::size_t total, std::size_t min_per_stratum) {
  check_probabilities(p);
  if (sigma_hat.size() != p.size())
    throw Error(ErrorCode::DimensionMismatch, "sigma and probability vectors differ in length");
  std::vector<double> weight(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(sigma_hat[i] >= 0.0) || !std::isfinite(sigma_hat[i]))
      throw Error(ErrorCode::OutOfDomain, "stratum standard deviations must be finite and >= 0");
    weight[i] = p[i] * sigma_hat[i];
  }
  if (std::all_of(weight.begin(), weight.end(), [](double w) { return w == 0.0; }))
    throw Error(ErrorCode::AllZeroSigma, "every stratum has zero estimated deviation");
  return make_plan(p, std::move(weight), total, min_per_stratum);
}

AllocationPlan proportional_allocation(std::span<const double> p, std::size_t total,
                                       std::size_t min_per_stratum) {
  check_probabilities(p);
  return make_plan(p, {p.begin(), p.end()}, total, min_per_stratum);
}

AllocationPlan equal_allocation(std::size_t strata, std::size_t total,
                                std::size_t min_per_stratum) {
  const std::vector<double> p(strata, 1.0 / static_cast<double>(strata));
  return proportional_allocation(p, total, min_per_stratum);
}

double stratified_variance(std::span<const double> p, std::span<const double> sigma,
                           std::span<const std::size_t> counts) {
  if (p.size() != sigma.size() || p.size() != counts.size())
    throw Error(ErrorCode::DimensionMismatch, "stratified variance inputs differ in length");
  double v = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double term = p[i] * p[i] * sigma[i] * sigma[i];
    if (term == 0.0) continue;
    if (counts[i] == 0)
      throw Error(ErrorCode::InsufficientSamples, "stratum with positive variance has no draws");
    v += term / static_cast<double>(counts[i]);
  }
  return v;
}

double stratified_variance_fractions(std::span<const double> p, std::span<const double> sigma,
                                     std::span<const double> q) {
  if (p.size() != sigma.size() || p.size() != q.size())
    throw Error(ErrorCode::DimensionMismatch, "stratified variance inputs differ in length");
  double v = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double term = p[i] * p[i] * sigma[i] * sigma[i];
    if (term == 0.0) continue;
    if (!(q[i] > 0.0))
      throw Error(ErrorCode::InsufficientSamples, "stratum with positive variance has no draws");
    v += term / q[i];
  }
  return v;
}

}  // namespace stratmc
