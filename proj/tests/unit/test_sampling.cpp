#include <gtest/gtest.h>

#include <cmath>

#include "stratmc/error.hpp"
#include "stratmc/normal.hpp"
#include "stratmc/sampling.hpp"

namespace stratmc {
namespace {

constexpr double kSlack = 1e-10;

Vector unit(std::size_t d, std::uint64_t seed) {
  RandomStream s(seed, 99);
  Vector v(d);
  s.fill_normal(v);
  return linalg::normalized(v);
}

TEST(StratumSpec, IndexRoundTripAndBounds) {
  const StratumSpec spec({3, 4, 2});
  EXPECT_EQ(spec.total(), 24u);
  for (std::size_t f = 0; f < spec.total(); ++f) EXPECT_EQ(spec.flat_index(spec.multi_index(f)), f);
  EXPECT_EQ(spec.multi_index(1), (std::vector<int>{1, 1, 2}));
  const auto [lo, hi] = spec.bounds(1, 1);
  EXPECT_TRUE(std::isinf(lo));
  EXPECT_NEAR(hi, normal_inv_cdf(0.25), 1e-15);
  const std::vector<int> bad{4, 1, 1};
  EXPECT_THROW(spec.check(bad), Error);
  EXPECT_THROW(StratumSpec({0}), Error);
}

TEST(DirectionSet, Validation) {
  EXPECT_THROW((void)DirectionSet::orthogonal({{1, 0}, {1, 1}}), Error);
  EXPECT_THROW((void)DirectionSet::general({{1, 0}, {2, 0}}), Error);
  EXPECT_THROW((void)DirectionSet::general({{1, 0}, {1, 0, 0}}), Error);
  const DirectionSet d = DirectionSet::general({{3, 4}});
  EXPECT_NEAR(d.column(0)[0], 0.6, 1e-15);
  EXPECT_FALSE(d.is_orthogonal());
}

// Property: every draw lands in its stratum and the stratum mean of v.z equals
// the truncated-normal mean (phi(a) - phi(b)) / (Phi(b) - Phi(a)).
TEST(Sampling, OneDirectionConditionalMean) {
  const Vector v = unit(6, 1);
  const int strata = 8;
  const StratumSpec spec({strata});
  for (int k = 1; k <= strata; ++k) {
    RandomStream s(3, static_cast<std::uint64_t>(k));
    const auto [a, b] = spec.bounds(0, k);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const StratifiedDraw d = sample_stratum_1d(v, k, strata, s);
      const double x = linalg::dot(v, d.z);
      ASSERT_GE(x, a - kSlack);
      ASSERT_LE(x, b + kSlack);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    const double pa = std::isinf(a) ? 0.0 : normal_pdf(a);
    const double pb = std::isinf(b) ? 0.0 : normal_pdf(b);
    const double expected = (pa - pb) * strata;
    EXPECT_NEAR(mean, expected, 4.0 * sd / std::sqrt(n)) << "stratum " << k;
  }
  RandomStream s(3, 0);
  EXPECT_THROW((void)sample_stratum_1d(v, 0, strata, s), Error);
  EXPECT_THROW((void)sample_stratum_1d(v, 9, strata, s), Error);
}

TEST(Sampling, OrthogonalSamplerKeepsComplementStandard) {
  const DirectionSet dirs = DirectionSet::orthogonal({{1, 0, 0}, {0, 1, 0}});
  OrthogonalSampler sampler(dirs, StratumSpec({4, 4}));
  RandomStream s(8, 0);
  Vector z(3);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 40000;
  const std::vector<int> k{2, 4};
  for (int i = 0; i < n; ++i) {
    EXPECT_EQ(sampler.sample(k, s, z), 1.0);
    ASSERT_LT(z[0], normal_inv_cdf(0.5) + kSlack);
    ASSERT_GT(z[1], normal_inv_cdf(0.75) - kSlack);
    sum += z[2];
    sq += z[2] * z[2];
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sq / n, 1.0, 0.03);
  EXPECT_DOUBLE_EQ(sampler.probability(3), 1.0 / 16.0);
  EXPECT_THROW(OrthogonalSampler(DirectionSet::general({{1, 0}, {1, 1}}), StratumSpec({2, 2})),
               Error);
}

TEST(Sampling, NonOrthogonalWeightsSumToOne) {
  const double c = std::sqrt(0.5);
  const DirectionSet dirs = DirectionSet::general({{1, 0, 0}, {c, c, 0}});
  NonOrthogonalSampler sampler(dirs, StratumSpec({3, 3}));
  double total = 0.0;
  Vector z(3);
  for (std::size_t f = 0; f < 9; ++f) {
    RandomStream s(10, f);
    const auto k = sampler.spec().multi_index(f);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) sum += sampler.sample(k, s, z);
    total += sum / n;
  }
  EXPECT_NEAR(total, 1.0, 0.01);
  EXPECT_THROW((void)sampler.probability(0), Error);
}

TEST(Sampling, NonOrthogonalEmptyIntervalGivesZeroWeight) {
  // Nearly parallel directions make the opposite-extreme box unreachable.
  const double eps = 1e-9;
  const DirectionSet dirs = DirectionSet::general({{1, 0}, {std::sqrt(1 - eps * eps), eps}});
  NonOrthogonalSampler sampler(dirs, StratumSpec({100, 100}));
  RandomStream s(1, 0);
  Vector z(2);
  const std::vector<int> k{100, 1};
  EXPECT_EQ(sampler.sample(k, s, z), 0.0);
  EXPECT_THROW((void)sample_stratum_nonorthogonal(dirs, k, sampler.spec(), s), Error);
}

TEST(Sampling, FactoryPicksSampler) {
  EXPECT_FALSE(make_sampler(DirectionSet::orthogonal({{1, 0}}), StratumSpec({4}))->weighted());
  EXPECT_TRUE(make_sampler(DirectionSet::general({{1, 0}, {1, 1}}), StratumSpec({2, 2}))->weighted());
}

// Negative control: marginally stratifying the independent factors eps of
// X = C_X eps (instead of X itself) and then treating the draws as if they
// belonged to the X-boxes biases a stratified estimate. With two unit
// directions at 45 degrees and 2 x 2 boxes, the orthant P(X1 > 0, X2 > 0) is
// 3/8 but the naive construction gives 3/8 + 1/16.
TEST(Sampling, FirstWayNonOrthogonalConstructionIsBiased) {
  const double c = std::sqrt(0.5);
  const Vector e1{1, 0, 0};
  const Vector e2{c, c, 0};
  const double box_p[2][2] = {{3.0 / 8.0, 1.0 / 8.0}, {1.0 / 8.0, 3.0 / 8.0}};
  auto in_orthant = [&](const Vector& z) {
    return linalg::dot(e1, z) > 0.0 && linalg::dot(e2, z) > 0.0 ? 1.0 : 0.0;
  };

  double naive = 0.0;
  std::size_t outside = 0;
  const int n = 20000;
  for (int k1 = 0; k1 < 2; ++k1)
    for (int k2 = 0; k2 < 2; ++k2) {
      RandomStream s(12, static_cast<std::uint64_t>(k1 * 2 + k2));
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double eps1 = normal_inv_cdf(stratum_uniform(k1 + 1, 2, s));
        const double eps2 = normal_inv_cdf(stratum_uniform(k2 + 1, 2, s));
        // X = C_X eps with C_X the Cholesky factor of V^T V = [[1, c], [c, 1]].
        const double x1 = eps1;
        const double x2 = c * eps1 + c * eps2;
        // Z = V (V^T V)^-1 X + (I - V (V^T V)^-1 V^T) Z'. V spans the first two
        // axes, so Z has V^T Z = X there and keeps Z'_3 in the complement.
        Vector z(3);
        z[0] = x1;
        z[1] = (x2 - c * x1) / c;
        z[2] = s.normal();
        const bool box1 = (linalg::dot(e1, z) > 0.0) == (k1 == 1);
        const bool box2 = (linalg::dot(e2, z) > 0.0) == (k2 == 1);
        if (!(box1 && box2)) ++outside;
        sum += in_orthant(z);
      }
      naive += box_p[k1][k2] * sum / n;
    }
  EXPECT_GT(outside, static_cast<std::size_t>(n / 10));
  EXPECT_NEAR(naive, 0.375 + 0.0625, 0.01);

  // The weighted sampler is unbiased on the same problem.
  NonOrthogonalSampler sampler(DirectionSet::general({e1, e2}), StratumSpec({2, 2}));
  double weighted = 0.0;
  Vector z(3);
  for (std::size_t f = 0; f < 4; ++f) {
    RandomStream s(13, f);
    const auto k = sampler.spec().multi_index(f);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = sampler.sample(k, s, z);
      sum += w * in_orthant(z);
    }
    weighted += sum / n;
  }
  EXPECT_NEAR(weighted, 0.375, 0.005);
}

}  // namespace
}  // namespace stratmc
