#include <gtest/gtest.h>

#include <cmath>

#include "stratmc/error.hpp"
#include "stratmc/normal.hpp"

namespace stratmc {
namespace {

TEST(Normal, CdfReferenceValues) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-15);
  EXPECT_NEAR(normal_cdf(-3.0), 0.0013498980316300946, 1e-17);
  EXPECT_NEAR(normal_pdf(1.0), 0.24197072451914337, 1e-16);
}

TEST(Normal, InverseRoundTrip) {
  for (double p : {1e-300, 1e-12, 1e-4, 0.02425, 0.3, 0.5, 0.77, 0.97575, 1 - 1e-10}) {
    const double x = normal_inv_cdf(p);
    EXPECT_NEAR(normal_cdf(x) / p, 1.0, 1e-12) << p;
  }
  EXPECT_THROW((void)normal_inv_cdf(0.0), Error);
  EXPECT_THROW((void)normal_inv_cdf(1.0), Error);
}

TEST(Normal, IntervalProbabilityInTails) {
  const double inf = std::numeric_limits<double>::infinity();
  // erfc(10 / sqrt 2) / 2
  EXPECT_NEAR(normal_interval_probability(10.0, inf) / 7.619853024160527e-24, 1.0, 1e-12);
  EXPECT_NEAR(normal_interval_probability(-inf, -10.0) / 7.619853024160527e-24, 1.0, 1e-12);
  EXPECT_NEAR(normal_interval_probability(-inf, inf), 1.0, 1e-15);
  EXPECT_NEAR(normal_interval_probability(-1.0, 1.0), 0.6826894921370859, 1e-15);
  EXPECT_EQ(normal_interval_probability(50.0, 60.0), 0.0);
}

TEST(Normal, IntervalQuantileStaysInside) {
  for (double u : {1e-9, 0.1, 0.5, 0.9, 1 - 1e-9}) {
    const double x = normal_interval_quantile(8.0, 9.0, u);
    EXPECT_GE(x, 8.0);
    EXPECT_LE(x, 9.0);
    const double y = normal_interval_quantile(-0.5, 0.5, u);
    EXPECT_NEAR(normal_interval_probability(-0.5, y), u * normal_interval_probability(-0.5, 0.5),
                1e-14);
  }
  EXPECT_TRUE(std::isnan(normal_interval_quantile(50.0, 60.0, 0.5)));
}

}  // namespace
}  // namespace stratmc
