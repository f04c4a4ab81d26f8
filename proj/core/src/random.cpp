#include "stratmc/random.hpp"

#include <string>

#include "stratmc/error.hpp"
#include "stratmc/normal.hpp"

namespace stratmc {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RandomStream::uniform() {
  // 53 random bits centred in their cell: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_inv_cdf(uniform()); }

void RandomStream::fill_normal(std::span<double> out) {
  for (double& x : out) x = normal();
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::IndexOutOfRange, "uniform_index over an empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double stratum_uniform(int k, int strata, double u) {
  if (strata < 1 || k < 1 || k > strata)
    throw Error(ErrorCode::IndexOutOfRange,
                "stratum " + std::to_string(k) + " outside 1.." + std::to_string(strata));
  return (static_cast<double>(k) - u) / static_cast<double>(strata);
}

double stratum_uniform(int k, int strata, RandomStream& stream) {
  return stratum_uniform(k, strata, stream.uniform());
}

}  // namespace stratmc
