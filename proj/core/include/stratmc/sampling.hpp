#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "stratmc/linalg.hpp"
#include "stratmc/random.hpp"

namespace stratmc {

using linalg::Vector;

/// Unit stratification directions in R^d, stored as columns.
class DirectionSet {
 public:
  /// Columns must satisfy V^T V = I within 1e-8 (NotOrthogonal otherwise).
  static DirectionSet orthogonal(std::vector<Vector> columns);
  /// Linearly independent unit columns; DependentDirections when they are not.
  static DirectionSet general(std::vector<Vector> columns);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t count() const noexcept { return columns_.size(); }
  [[nodiscard]] const Vector& column(std::size_t i) const { return columns_.at(i); }
  [[nodiscard]] const std::vector<Vector>& columns() const noexcept { return columns_; }
  [[nodiscard]] bool is_orthogonal() const noexcept { return orthogonal_; }

 private:
  DirectionSet(std::vector<Vector> columns, bool orthogonal);

  std::size_t dim_ = 0;
  std::vector<Vector> columns_;
  bool orthogonal_ = false;
};

/// Product grid of equiprobable marginal intervals, one axis per direction.
/// Stratum indices are 1-based per axis; flat indices are 0-based with the
/// last axis varying fastest.
class StratumSpec {
 public:
  explicit StratumSpec(std::vector<int> counts);

  [[nodiscard]] const std::vector<int>& counts() const noexcept { return counts_; }
  [[nodiscard]] std::size_t axes() const noexcept { return counts_.size(); }
  [[nodiscard]] std::size_t total() const noexcept { return total_; }

  [[nodiscard]] std::vector<int> multi_index(std::size_t flat) const;
  [[nodiscard]] std::size_t flat_index(std::span<const int> k) const;
  /// (Phi^-1((k-1)/K), Phi^-1(k/K)) with infinite outer bounds.
  [[nodiscard]] std::pair<double, double> bounds(std::size_t axis, int k) const;
  /// Throws IndexOutOfRange when some k_j is outside 1..K_j.
  void check(std::span<const int> k) const;

 private:
  std::vector<int> counts_;
  std::size_t total_ = 1;
};

struct StratifiedDraw {
  Vector z;
  std::vector<int> stratum;
  double weight = 1.0;
};

/// Draws standard normal vectors conditioned on a stratum.
class StratumSampler {
 public:
  virtual ~StratumSampler() = default;

  [[nodiscard]] virtual std::size_t dim() const = 0;
  [[nodiscard]] virtual const StratumSpec& spec() const = 0;
  /// True when draws carry likelihood weights instead of known stratum
  /// probabilities.
  [[nodiscard]] virtual bool weighted() const = 0;
  /// Known probability of stratum `flat` (unweighted samplers only).
  [[nodiscard]] virtual double probability(std::size_t flat) const = 0;
  /// Writes one draw into z and returns its weight.
  virtual double sample(std::span<const int> stratum, RandomStream& stream,
                        std::span<double> z) const = 0;
};

/// Orthonormal directions: X = V^T Z lies in a product of equiprobable
/// intervals, Z = V X + (I - V V^T) Z'. Weight is always 1.
class OrthogonalSampler final : public StratumSampler {
 public:
  OrthogonalSampler(DirectionSet directions, StratumSpec spec);

  [[nodiscard]] std::size_t dim() const override { return directions_.dim(); }
  [[nodiscard]] const StratumSpec& spec() const override { return spec_; }
  [[nodiscard]] bool weighted() const override { return false; }
  [[nodiscard]] double probability(std::size_t flat) const override;
  double sample(std::span<const int> stratum, RandomStream& stream,
                std::span<double> z) const override;

  [[nodiscard]] const DirectionSet& directions() const noexcept { return directions_; }

 private:
  DirectionSet directions_;
  StratumSpec spec_;
};

/// General (non-orthogonal) directions e_i with box constraints
/// a_i^- <= e_i . Z <= a_i^+.
///
/// The directions are orthonormalized to f_1..f_d' by Gram-Schmidt. The
/// coordinate along f_m is drawn from a normal truncated to bounds that depend
/// on the coordinates already drawn along f_1..f_{m-1}, so each draw satisfies
/// every box constraint. The draw's weight is the product of the truncation
/// probabilities. Summing the per-stratum means of weight * g over all strata
/// estimates E[g(Z)] without ever evaluating the joint box probabilities.
class NonOrthogonalSampler final : public StratumSampler {
 public:
  NonOrthogonalSampler(DirectionSet directions, StratumSpec spec);

  [[nodiscard]] std::size_t dim() const override { return directions_.dim(); }
  [[nodiscard]] const StratumSpec& spec() const override { return spec_; }
  [[nodiscard]] bool weighted() const override { return true; }
  [[nodiscard]] double probability(std::size_t) const override;
  /// Returns weight 0 (and a draw that is not meaningful) when a truncation
  /// interval carries no representable probability.
  double sample(std::span<const int> stratum, RandomStream& stream,
                std::span<double> z) const override;

  [[nodiscard]] const DirectionSet& directions() const noexcept { return directions_; }
  [[nodiscard]] const std::vector<Vector>& orthonormal_basis() const noexcept { return basis_; }

 private:
  DirectionSet directions_;
  StratumSpec spec_;
  std::vector<Vector> basis_;      // f_m
  Vector residual_norms_;          // ||f'_m||
  std::vector<Vector> coupling_;   // coupling_[m][j] = e_m . f_j for j < m
};

StratifiedDraw sample_stratum_1d(std::span<const double> v, int k, int strata,
                                 RandomStream& stream);
StratifiedDraw sample_stratum_orthogonal(const DirectionSet& directions,
                                         std::span<const int> stratum, const StratumSpec& spec,
                                         RandomStream& stream);
/// Throws EmptyBoundInterval when the draw hits an interval of zero probability.
StratifiedDraw sample_stratum_nonorthogonal(const DirectionSet& directions,
                                            std::span<const int> stratum,
                                            const StratumSpec& spec, RandomStream& stream);

/// Picks the orthogonal sampler for orthogonal sets, the weighted one otherwise.
std::unique_ptr<StratumSampler> make_sampler(DirectionSet directions, StratumSpec spec);

}  // namespace stratmc
