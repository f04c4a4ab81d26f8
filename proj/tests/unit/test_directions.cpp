#include <gtest/gtest.h>

#include <cmath>

#include "stratmc/directions.hpp"
#include "stratmc/error.hpp"

namespace stratmc {
namespace {

using linalg::angle_degrees;

TEST(Directions, PcaOfDiagonalMatrix) {
  const Vector diag{1.0, 5.0, 3.0};
  const PcaResult r = pca_directions(linalg::SymmetricMatrix(linalg::Matrix::diagonal(diag)), 2);
  EXPECT_NEAR(std::abs(r.directions.column(0)[1]), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(r.directions.column(1)[2]), 1.0, 1e-14);
  EXPECT_NEAR(r.explained_ratio, 8.0 / 9.0, 1e-14);
  EXPECT_TRUE(r.directions.is_orthogonal());
}

TEST(Directions, LaIsNormalizedForwardWeightedFactor) {
  const BsModel model(BsParams::single_asset(50.0, 0.3, 0.05, 1.0, 8));
  const Vector mu = model.mu();
  Vector u(mu.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = std::exp(mu[k]);
  const Vector expected = model.factor().apply_transposed(u);
  EXPECT_LT(angle_degrees(la_direction_bs(model), expected), 1e-10);
  EXPECT_NEAR(linalg::norm(la_direction_bs(model)), 1.0, 1e-14);
}

TEST(Directions, LtColumnsAreOrthonormalAndStartAtLa) {
  const BsModel model(BsParams::basket({40, 50, 60}, {0.1, 0.2, 0.3}, 0.4, 0.05, 1.0, 4));
  const DirectionSet lt = lt_directions_bs(model, 5);
  EXPECT_TRUE(lt.is_orthogonal());
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      EXPECT_NEAR(linalg::dot(lt.column(i), lt.column(j)), i == j ? 1.0 : 0.0, 1e-12);
  EXPECT_LT(angle_degrees(lt.column(0), la_direction_bs(model)), 1e-8);
}

TEST(Directions, LaMultiFollowsGradientAtPreviousDirection) {
  // grad f(z) = (1 + z_2, 1 + z_1): v1 = (1,1)/sqrt2, v2 = grad(v1) normalized = v1,
  // so the pair is dependent.
  GradientFn parallel = [](std::span<const double> z) { return Vector{1 + z[1], 1 + z[0]}; };
  EXPECT_THROW((void)la_directions_multi(parallel, 2, 2), Error);
  GradientFn turning = [](std::span<const double> z) { return Vector{1.0, 3.0 * z[0]}; };
  const DirectionSet d = la_directions_multi(turning, 2, 2);
  EXPECT_NEAR(d.column(0)[0], 1.0, 1e-15);
  EXPECT_NEAR(angle_degrees(d.column(1), Vector{1.0, 3.0}), 0.0, 1e-12);
}

CirParams cir() {
  CirParams p;
  p.steps = 32;
  p.monitoring = CirMonitoring::StepStart;
  return p;
}

TEST(Directions, CirWorkspaceRecurrences) {
  const CirParams p = cir();
  const LtCirWorkspace ws = LtCirWorkspace::build(p, Vector(p.steps, 0.0));
  const std::size_t n = p.steps;
  EXPECT_EQ(ws.t[n - 1], ws.beta[n - 1]);
  for (std::size_t m = 1; m <= n; ++m) {
    EXPECT_EQ(ws.weights(m - 1, m - 1), ws.beta[m - 1]);
    for (std::size_t j = m; j < n; ++j)
      EXPECT_EQ(ws.weights(m - 1, j), ws.alpha[j] * ws.weights(m - 1, j - 1));
  }
  // t_j is the column sum of the sensitivities of S_1..S_N to Z_j.
  const Matrix sens = cir_sensitivity(p);
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t row = 0; row < n; ++row) col += sens(row, j);
    EXPECT_NEAR(ws.t[j], col, 1e-12 * std::abs(col));
  }
}

TEST(Directions, CirDirectionsAreCloseButDistinct) {
  const CirParams p = cir();
  const DirectionSet lt = lt_directions_cir(p, 3);
  EXPECT_TRUE(lt.is_orthogonal());
  const double angle = angle_degrees(la_direction_cir(p), lt.column(0));
  EXPECT_GT(angle, 0.1);
  EXPECT_LT(angle, 3.0);
  CirParams bad = p;
  bad.sigma = 30.0;
  EXPECT_THROW((void)lt_directions_cir(bad, 1), Error);
}

TEST(Directions, PilotPcaIsReproducible) {
  const CirParams p = cir();
  RandomStream a(3, 1), b(3, 1);
  const PilotPcaResult ra = pilot_pca_cir(p, 500, a);
  const PilotPcaResult rb = pilot_pca_cir(p, 500, b);
  EXPECT_EQ(ra.direction, rb.direction);
  EXPECT_NEAR(linalg::norm(ra.direction), 1.0, 1e-14);
  RandomStream c(3, 1);
  const PilotPcaResult pull = pilot_pca_cir(p, 500, c, PilotMapping::Pullback);
  EXPECT_EQ(pull.price_eigenvector, ra.price_eigenvector);
}

TEST(Directions, ExportImportRoundTrip) {
  const DirectionSet d = DirectionSet::general({{0.6, 0.8, 0.0}, {0.1, 0.2, 0.3}});
  const auto back = import_directions(export_directions(d));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(back[i], d.column(i));
  EXPECT_THROW((void)import_directions("1,2\n3\n"), Error);
}

}  // namespace
}  // namespace stratmc
