#include <gtest/gtest.h>

#include <cmath>

#include "stratmc/error.hpp"
#include "stratmc/estimators.hpp"
#include "stratmc/sampling.hpp"

namespace stratmc {
namespace {

TEST(Estimators, IndicatorOnStratumBoundaryIsExact) {
  const Vector v{0.6, 0.8, 0.0};
  FunctionIntegrand g(3, [&](std::span<const double> z) { return linalg::dot(v, z) > 0 ? 1.0 : 0.0; });
  OrthogonalSampler sampler(DirectionSet::orthogonal({v}), StratumSpec({2}));
  const std::vector<std::size_t> counts{50, 50};
  const EstimateReport r = stratified_estimate(g, sampler, counts, {1, 0, 1});
  EXPECT_DOUBLE_EQ(r.price, 0.5);
  EXPECT_DOUBLE_EQ(r.variance, 0.0);
  EXPECT_EQ(r.n_samples, 100u);
}

TEST(Estimators, PlainMonteCarloMomentsOfLinearFunction) {
  FunctionIntegrand g(4, [](std::span<const double> z) { return 2.0 + z[0] + z[3]; });
  const EstimateReport r = plain_mc_estimate(g, 200000, {3, 0, 1});
  EXPECT_NEAR(r.price, 2.0, 4.0 * r.standard_error());
  EXPECT_NEAR(r.per_draw_variance(), 2.0, 0.03);
}

TEST(Estimators, ResultsDoNotDependOnThreadCount) {
  const Vector v{0.6, 0.8};
  FunctionIntegrand g(2, [](std::span<const double> z) { return std::exp(z[0]) * z[1] * z[1]; });
  OrthogonalSampler sampler(DirectionSet::orthogonal({v}), StratumSpec({16}));
  StratifiedRunOptions o;
  o.total = 20000;
  o.exec = {9, 4, 1};
  const EstimateReport one = run_stratified(g, sampler, o);
  o.exec.threads = 4;
  const EstimateReport four = run_stratified(g, sampler, o);
  EXPECT_EQ(one.price, four.price);
  EXPECT_EQ(one.variance, four.variance);
  const EstimateReport mc1 = plain_mc_estimate(g, 50000, {9, 5, 1});
  const EstimateReport mc4 = plain_mc_estimate(g, 50000, {9, 5, 4});
  EXPECT_EQ(mc1.price, mc4.price);
  EXPECT_EQ(mc1.variance, mc4.variance);
}

TEST(Estimators, OptimalRunSplitsPilotAndMainStage) {
  const Vector v{1.0, 0.0};
  FunctionIntegrand g(2, [](std::span<const double> z) { return std::max(z[0], 0.0); });
  OrthogonalSampler sampler(DirectionSet::orthogonal({v}), StratumSpec({10}));
  StratifiedRunOptions o;
  o.total = 10000;
  o.exec = {1, 0, 1};
  const EstimateReport r = run_stratified(g, sampler, o);
  EXPECT_EQ(r.pilot_samples, 1000u);
  EXPECT_EQ(r.n_samples, 9000u);
  // E[max(Z, 0)] = 1 / sqrt(2 pi)
  EXPECT_NEAR(r.price, 1.0 / std::sqrt(2.0 * M_PI), 4.0 * r.standard_error());
  o.rule = AllocationRule::Constant;
  const EstimateReport c = run_stratified(g, sampler, o);
  EXPECT_EQ(c.n_samples, 10000u);
  EXPECT_EQ(c.pilot_samples, 0u);
}

TEST(Estimators, WeightedSamplerRecoversLognormalMean) {
  const double c = std::sqrt(0.5);
  FunctionIntegrand g(3, [](std::span<const double> z) { return std::exp(z[0] + z[1]); });
  auto sampler = make_sampler(DirectionSet::general({{1, 0, 0}, {c, c, 0}}), StratumSpec({6, 6}));
  StratifiedRunOptions o;
  o.total = 72000;
  o.exec = {2, 0, 1};
  const EstimateReport r = run_stratified(g, *sampler, o);
  // z1 + z2 ~ N(0, 2)
  EXPECT_NEAR(r.price, std::exp(1.0), 4.0 * r.standard_error());
}

TEST(Estimators, LhsRequiresOrthogonalRotation) {
  FunctionIntegrand g(2, [](std::span<const double> z) { return z[0] * z[0] + z[1]; });
  linalg::Matrix rot = linalg::Matrix::identity(2);
  const EstimateReport r = lhs_estimate(g, rot, 3000, 30, {4, 0, 1});
  EXPECT_EQ(r.n_samples, 3000u);
  EXPECT_NEAR(r.price, 1.0, 4.0 * r.standard_error());
  rot(0, 1) = 0.5;
  EXPECT_THROW((void)lhs_estimate(g, rot, 3000, 30, {4, 0, 1}), Error);
}

}  // namespace
}  // namespace stratmc
