#include <gtest/gtest.h>

#include "stratmc/config.hpp"
#include "stratmc/experiment.hpp"
#include "stratmc/table.hpp"

namespace stratmc {
namespace {

ExperimentConfig small(const std::string& model) {
  const std::string bs = R"([model]
type = bs
spots = 50
vols = 0.3
rate = 0.05
maturity = 1
steps = 8
)";
  const std::string cir = R"([model]
type = cir
s0 = 100
alpha = 1.5
mu = 100
sigma = 8
rate = 0.05
maturity = 1
steps = 16
monitoring = step-start
)";
  return parse_config_string((model == "bs" ? bs : cir) + R"([payoff]
kind = asian-basket
strikes = )" + (model == "bs" ? "50" : "100") + R"(
[run]
methods = )" + (model == "bs" ? "la, lt, pca, la+pca, two-dir-la" : "la, lt, pilot-pca, two-dir-lt") + R"(
samples = 4000
strata = 10
strata_2d = 4
pilot_paths = 300
seed = 11
lhs = true
lhs_replications = 4
[output]
timing = none
)");
}

TEST(Experiment, RowLayout) {
  const auto rows = run_experiment(small("bs"));
  ASSERT_EQ(rows.size(), 1u + 5u * 2u + 1u);
  EXPECT_EQ(rows.front().method, "mc");
  EXPECT_EQ(rows.front().alloc, "none");
  EXPECT_EQ(rows.back().method, "lhs");
  EXPECT_EQ(rows.back().strata, 1000u);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.time_ratio.has_value());
    EXPECT_NEAR(r.price, rows.front().price, 1.0);
  }
  EXPECT_EQ(rows[2].alloc, "opt");
  EXPECT_EQ(rows[2].n_samples, 3600u);
}

TEST(Experiment, DeterministicAcrossThreads) {
  for (const std::string model : {"bs", "cir"}) {
    ExperimentConfig c = small(model);
    c.threads = 1;
    const std::string one = to_csv(run_experiment(c));
    c.threads = 3;
    EXPECT_EQ(one, to_csv(run_experiment(c))) << model;
  }
}

TEST(Experiment, DirectionsAreCachedPerMethod) {
  ExperimentContext ctx(small("cir"));
  const auto& a = ctx.directions(Method::PilotPca);
  const auto& b = ctx.directions(Method::PilotPca);
  EXPECT_EQ(&a, &b);
  EXPECT_EQ(a.directions.count(), 1u);
  EXPECT_EQ(ctx.directions(Method::TwoDirLt).directions.count(), 2u);
}

}  // namespace
}  // namespace stratmc
