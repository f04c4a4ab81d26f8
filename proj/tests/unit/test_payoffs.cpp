#include <gtest/gtest.h>

#include <limits>

#include "stratmc/error.hpp"
#include "stratmc/payoffs.hpp"

namespace stratmc {
namespace {

PayoffSpec spec(PayoffKind kind, double strike, std::optional<double> barrier = std::nullopt) {
  PayoffSpec s;
  s.kind = kind;
  s.strike = strike;
  s.barrier = barrier;
  s.weights = equal_weights(4);
  s.discount = 0.5;
  return s;
}

TEST(Payoffs, HandComputedValues) {
  const std::vector<double> path{10, 12, 14, 16};  // average 13
  EXPECT_DOUBLE_EQ(payoff_value(path, 1, spec(PayoffKind::AsianBasket, 11)), 1.0);
  EXPECT_DOUBLE_EQ(payoff_value(path, 1, spec(PayoffKind::AsianBasket, 14)), 0.0);
  // Only values strictly below the barrier survive; touching it knocks out.
  EXPECT_DOUBLE_EQ(payoff_value(path, 1, spec(PayoffKind::AsianBarrierExpiry, 11, 16.1)), 1.0);
  EXPECT_DOUBLE_EQ(payoff_value(path, 1, spec(PayoffKind::AsianBarrierExpiry, 11, 16)), 0.0);
  EXPECT_DOUBLE_EQ(payoff_value(path, 1, spec(PayoffKind::AsianBarrierComplete, 11, 16.1)), 1.0);
  EXPECT_DOUBLE_EQ(payoff_value(path, 1, spec(PayoffKind::AsianBarrierComplete, 11, 16)), 0.0);
  const std::vector<double> spike{10, 20, 12, 10};  // average 13, maximum in the middle
  EXPECT_DOUBLE_EQ(payoff_value(spike, 1, spec(PayoffKind::AsianBarrierExpiry, 11, 15)), 1.0);
  EXPECT_DOUBLE_EQ(payoff_value(spike, 1, spec(PayoffKind::AsianBarrierComplete, 11, 15)), 0.0);
}

TEST(Payoffs, BasketAveragesEveryNode) {
  // Two assets, two dates, node k = j * M + i.
  const std::vector<double> nodes{10, 30, 10, 30};
  EXPECT_DOUBLE_EQ(payoff_value(nodes, 2, spec(PayoffKind::AsianBasket, 15)), 2.5);
  EXPECT_THROW((void)payoff_value(nodes, 2, spec(PayoffKind::AsianBarrierComplete, 15, 25)), Error);
}

TEST(Payoffs, InfiniteBarrierIsPlainAsian) {
  const std::vector<double> path{10, 40, 14, 16};
  const double inf = std::numeric_limits<double>::infinity();
  const double plain = payoff_value(path, 1, spec(PayoffKind::AsianBasket, 11));
  EXPECT_DOUBLE_EQ(payoff_value(path, 1, spec(PayoffKind::AsianBarrierExpiry, 11, inf)), plain);
  EXPECT_DOUBLE_EQ(payoff_value(path, 1, spec(PayoffKind::AsianBarrierComplete, 11, inf)), plain);
}

TEST(Payoffs, NamesRoundTrip) {
  for (PayoffKind k : {PayoffKind::AsianBasket, PayoffKind::AsianBarrierExpiry,
                       PayoffKind::AsianBarrierComplete})
    EXPECT_EQ(parse_payoff_kind(to_string(k)), k);
  EXPECT_THROW((void)parse_payoff_kind("lookback"), Error);
}

TEST(Payoffs, Validation) {
  EXPECT_THROW(spec(PayoffKind::AsianBarrierExpiry, 10).validate(4), Error);
  EXPECT_THROW(spec(PayoffKind::AsianBasket, -1).validate(4), Error);
  EXPECT_THROW(spec(PayoffKind::AsianBasket, 10).validate(5), Error);
  EXPECT_NO_THROW(spec(PayoffKind::AsianBarrierComplete, 10, 20).validate(4));
}

}  // namespace
}  // namespace stratmc
