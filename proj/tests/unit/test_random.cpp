#include <gtest/gtest.h>

#include <set>

#include "stratmc/lhs.hpp"
#include "stratmc/normal.hpp"
#include "stratmc/random.hpp"

namespace stratmc {
namespace {

TEST(Random, StreamsAreReproducible) {
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  RandomStream c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    differs = differs || x != c.uniform();
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_TRUE(differs);
}

TEST(Random, SubstreamsOfPhasesAreDisjoint) {
  EXPECT_NE(RandomStream::substream(1, 0), RandomStream::substream(2, 0));
  EXPECT_NE(RandomStream::substream(1, 5), RandomStream::substream(1, 6));
}

TEST(Random, StratumUniformCoversItsInterval) {
  for (double u : {1e-12, 0.3, 1.0 - 1e-12}) {
    const double v = stratum_uniform(3, 10, u);
    EXPECT_GT(v, 0.2);
    EXPECT_LT(v, 0.3 + 1e-15);
  }
}

TEST(Random, LhsPutsOneSampleInEveryCell) {
  RandomStream s(5, 0);
  const std::size_t n = 50;
  const linalg::Matrix m = lhs_normals(n, 4, s);
  for (std::size_t j = 0; j < 4; ++j) {
    std::set<std::size_t> cells;
    for (std::size_t i = 0; i < n; ++i)
      cells.insert(static_cast<std::size_t>(normal_cdf(m(i, j)) * static_cast<double>(n)));
    EXPECT_EQ(cells.size(), n);
  }
}

}  // namespace
}  // namespace stratmc
