#include <gtest/gtest.h>

#include <numeric>

#include "stratmc/allocation.hpp"
#include "stratmc/error.hpp"
#include "stratmc/random.hpp"

namespace stratmc {
namespace {

std::size_t sum(const std::vector<std::size_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{0});
}

TEST(Allocation, OptimalIsProportionalToPSigma) {
  const std::vector<double> p{0.25, 0.25, 0.5};
  const std::vector<double> sigma{1.0, 3.0, 2.0};
  const AllocationPlan plan = optimal_allocation(p, sigma, 800);
  // p sigma = 0.25, 0.75, 1.0 -> 1/8, 3/8, 4/8
  EXPECT_DOUBLE_EQ(plan.fractions[0], 0.125);
  EXPECT_DOUBLE_EQ(plan.fractions[1], 0.375);
  EXPECT_DOUBLE_EQ(plan.fractions[2], 0.5);
  EXPECT_EQ(plan.counts, (std::vector<std::size_t>{100, 300, 400}));
  // (sum p sigma)^2 per draw
  EXPECT_NEAR(stratified_variance_fractions(p, sigma, plan.fractions), 4.0, 1e-14);
  EXPECT_NEAR(stratified_variance(p, sigma, plan.counts), 4.0 / 800, 1e-16);
}

TEST(Allocation, MinimumPerStratumAndUnreachableStrata) {
  const std::vector<double> p{0.5, 0.0, 0.5};
  const std::vector<double> sigma{1.0, 5.0, 0.0};
  const AllocationPlan plan = optimal_allocation(p, sigma, 100);
  EXPECT_EQ(plan.counts[1], 0u);
  EXPECT_GE(plan.counts[2], kMinPerStratum);
  EXPECT_EQ(sum(plan.counts), 100u);
  EXPECT_THROW((void)optimal_allocation(p, std::vector<double>{0, 0, 0}, 100), Error);
  EXPECT_THROW((void)equal_allocation(10, 19), Error);
}

TEST(Allocation, EqualAllocationSpreadsRemainder) {
  const AllocationPlan plan = equal_allocation(3, 10);
  EXPECT_EQ(sum(plan.counts), 10u);
  for (std::size_t n : plan.counts) EXPECT_TRUE(n == 3 || n == 4);
}

// Property: counts always sum to the budget, respect the floor, and the
// optimal per-draw variance never exceeds the proportional one.
TEST(Allocation, RandomInstanceProperties) {
  RandomStream s(2024, 0);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t k = 1 + s.uniform_index(40);
    std::vector<double> p(k), sigma(k);
    double total_p = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = s.uniform();
      total_p += p[i];
      sigma[i] = s.uniform() < 0.1 ? 0.0 : 3.0 * s.uniform();
    }
    for (double& x : p) x /= total_p;
    sigma[0] = 1.0;
    const std::size_t budget = 2 * k + s.uniform_index(5000);
    const AllocationPlan opt = optimal_allocation(p, sigma, budget);
    const AllocationPlan prop = proportional_allocation(p, budget);
    EXPECT_EQ(sum(opt.counts), budget);
    EXPECT_EQ(sum(prop.counts), budget);
    for (std::size_t n : opt.counts) EXPECT_GE(n, kMinPerStratum);
    EXPECT_LE(stratified_variance_fractions(p, sigma, opt.fractions),
              stratified_variance_fractions(p, sigma, prop.fractions) * (1 + 1e-12));
  }
}

}  // namespace
}  // namespace stratmc
