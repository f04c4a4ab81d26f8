#include <gtest/gtest.h>

#include <cmath>

#include "stratmc/directions.hpp"
#include "stratmc/error.hpp"
#include "stratmc/estimators.hpp"
#include "stratmc/models.hpp"
#include "stratmc/normal.hpp"
#include "stratmc/payoffs.hpp"

namespace stratmc {
namespace {

double black_scholes_call(double s, double k, double vol, double r, double t) {
  const double d1 = (std::log(s / k) + (r + 0.5 * vol * vol) * t) / (vol * std::sqrt(t));
  const double d2 = d1 - vol * std::sqrt(t);
  return s * normal_cdf(d1) - k * std::exp(-r * t) * normal_cdf(d2);
}

TEST(BsModel, SingleDateAsianIsEuropeanCall) {
  const BsModel model(BsParams::single_asset(50.0, 0.3, 0.05, 1.0, 1));
  PayoffSpec spec;
  spec.strike = 50.0;
  spec.weights = model.params().weights;
  spec.discount = model.discount();
  const BsPayoff g(model, spec);
  OrthogonalSampler sampler(DirectionSet::orthogonal({la_direction_bs(model)}), StratumSpec({100}));
  StratifiedRunOptions o;
  o.total = 20000;
  o.exec = {5, 0, 1};
  const EstimateReport r = run_stratified(g, sampler, o);
  EXPECT_NEAR(r.price, black_scholes_call(50.0, 50.0, 0.3, 0.05, 1.0), 4.0 * r.standard_error());
  EXPECT_LT(r.standard_error(), 5e-3);
}

TEST(BsModel, CovarianceIsKroneckerOfTimeAndAssets) {
  const BsModel model(BsParams::basket({40.0, 60.0}, {0.2, 0.4}, 0.3, 0.05, 1.0, 3));
  const auto& c = model.covariance();
  // node k = j * M + i: Sigma(t_j, t_n) * rho_il sigma_i sigma_l
  EXPECT_NEAR(c(0, 0), (1.0 / 3) * 0.04, 1e-15);
  EXPECT_NEAR(c(1, 4), (1.0 / 3) * 0.3 * 0.2 * 0.4, 1e-15);
  EXPECT_NEAR(c(5, 5), 1.0 * 0.16, 1e-15);
  const auto& f = model.factor().matrix();
  EXPECT_LT(linalg::relative_frobenius_error(f * f.transpose(), c.matrix()), 1e-13);
}

TEST(BsModel, ZeroNoisePathAndDiscount) {
  const BsModel model(BsParams::single_asset(50.0, 0.3, 0.05, 1.0, 4));
  const Vector zero(4, 0.0);
  const PathMatrix p = model.path(zero);
  for (std::size_t j = 0; j < 4; ++j)
    EXPECT_NEAR(p.at(0, j), 50.0 * std::exp((0.05 - 0.045) * 0.25 * static_cast<double>(j + 1)),
                1e-12);
  EXPECT_NEAR(model.discount(), std::exp(-0.05), 1e-15);
}

TEST(BsModel, GradientMatchesFiniteDifferences) {
  const BsModel model(BsParams::basket({40.0, 60.0, 50.0}, {0.2, 0.4, 0.3}, 0.5, 0.05, 1.0, 4));
  RandomStream s(1, 0);
  Vector eps(model.dim());
  s.fill_normal(eps);
  for (double& x : eps) x *= 0.5;
  const Vector grad = model.gradient(eps);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    Vector up = eps, down = eps;
    up[i] += 1e-5;
    down[i] -= 1e-5;
    const double fd = (bs_basket_g(up, model) - bs_basket_g(down, model)) / 2e-5;
    EXPECT_NEAR(fd, grad[i], 1e-6 * std::max(1.0, std::abs(grad[i])));
  }
}

TEST(BsModel, ValidationErrors) {
  BsParams p = BsParams::single_asset(50.0, 0.3, 0.05, 1.0, 4);
  p.vols[0] = -0.1;
  EXPECT_THROW(BsModel{p}, Error);
  p = BsParams::single_asset(50.0, 0.3, 0.05, 1.0, 4);
  p.grid[2] = p.grid[1];
  EXPECT_THROW(BsModel{p}, Error);
  // An equicorrelation below -1/(M-1) is not positive definite.
  EXPECT_THROW(BsModel(BsParams::basket({1.0, 2.0, 3.0}, {0.1, 0.1, 0.1}, -0.9, 0.0, 1.0, 1)), Error);
}

CirParams cir() {
  CirParams p;
  p.steps = 16;
  return p;
}

TEST(Cir, ZeroNoiseClosedFormMatchesRecursion) {
  CirParams p = cir();
  p.s0 = 80.0;
  const Vector closed = cir_zero_noise_path(p);
  Vector euler(p.steps + 1);
  EXPECT_FALSE(cir_euler_nodes(Vector(p.steps, 0.0), p, euler));
  for (std::size_t j = 0; j <= p.steps; ++j) EXPECT_NEAR(closed[j], euler[j], 1e-12 * 100);
  EXPECT_NEAR(closed[3], std::pow(1 - 1.5 / 16, 3) * (80.0 - 100.0) + 100.0, 1e-12);
}

TEST(Cir, SensitivityMatchesFiniteDifferences) {
  const CirParams p = cir();
  const Matrix j = cir_sensitivity(p);
  const std::size_t n = p.steps;
  Vector up(n, 0.0), down(n, 0.0), a(n + 1), b(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    up[i] = 1e-6;
    down[i] = -1e-6;
    cir_euler_nodes(up, p, a);
    cir_euler_nodes(down, p, b);
    for (std::size_t row = 0; row < n; ++row)
      EXPECT_NEAR((a[row + 1] - b[row + 1]) / 2e-6, j(row, i), 1e-6 * 10);
    up[i] = down[i] = 0.0;
  }
}

TEST(Cir, FlooringAndMonitoring) {
  CirParams p = cir();
  Vector z(p.steps, -40.0);
  Vector out(p.steps + 1);
  EXPECT_TRUE(cir_euler_nodes(z, p, out));
  EXPECT_EQ(p.monitored_nodes().front(), 1u);
  p.monitoring = CirMonitoring::StepStart;
  EXPECT_EQ(p.monitored_nodes().front(), 0u);
  EXPECT_EQ(p.monitored_nodes().back(), p.steps - 1);
  EXPECT_EQ(cir_euler_path(Vector(p.steps, 0.0), p).times, p.steps);
}

TEST(Cir, FellerAndDomainChecks) {
  CirParams p = cir();
  p.sigma = 20.0;  // 2 alpha mu = 300 < 400
  EXPECT_THROW(p.validate(), Error);
  EXPECT_NO_THROW(p.validate(false));
  p = cir();
  p.s0 = -1.0;
  EXPECT_THROW(p.validate(), Error);
}

// The Euler scheme is linear in expectation, so the mean of the path average
// equals the zero-noise average.
TEST(Cir, MeanOfAverageIsZeroNoiseAverage) {
  const CirParams p = cir();
  const Vector closed = cir_zero_noise_path(p);
  double target = 0.0;
  for (std::size_t j : p.monitored_nodes()) target += closed[j];
  target /= static_cast<double>(p.steps);
  FunctionIntegrand avg(p.steps, [&](std::span<const double> z) {
    const PathMatrix m = cir_euler_path(z, p);
    double a = 0.0;
    for (double v : m.values) a += v;
    return a / static_cast<double>(m.values.size());
  });
  const EstimateReport r = plain_mc_estimate(avg, 50000, {6, 0, 1});
  EXPECT_NEAR(r.price, target, 4.0 * r.standard_error());
}

}  // namespace
}  // namespace stratmc
