#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace stratmc {

/// Seedable random source whose output is a pure function of (seed, stream id).
///
/// Distinct stream ids give independent sequences, so every stratum, chunk or
/// replication can own its substream and results do not depend on how work is
/// scheduled across threads. Uniforms and normals are derived from the raw
/// 64-bit engine output with portable arithmetic only (no library
/// distributions), keeping sequences identical across standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal via inverse transform.
  double normal();
  void fill_normal(std::span<double> out);
  /// Uniform integer in [0, n), unbiased.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Child stream id for a (phase, index) pair; keeps substreams of different
  /// phases disjoint.
  static std::uint64_t substream(std::uint64_t phase, std::uint64_t index) noexcept {
    return (phase << 40) ^ index;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// V = (k - U) / K, uniform on ((k-1)/K, k/K) for k in 1..K.
double stratum_uniform(int k, int strata, double u);
double stratum_uniform(int k, int strata, RandomStream& stream);

}  // namespace stratmc
