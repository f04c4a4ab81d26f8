#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "stratmc/estimators.hpp"
#include "stratmc/models.hpp"

namespace stratmc {

enum class PayoffKind { AsianBasket, AsianBarrierExpiry, AsianBarrierComplete };

std::string_view to_string(PayoffKind kind) noexcept;
/// Accepts "asian-basket", "asian-barrier-expiry", "asian-barrier-complete".
PayoffKind parse_payoff_kind(std::string_view name);

struct PayoffSpec {
  PayoffKind kind = PayoffKind::AsianBasket;
  double strike = 0.0;
  std::optional<double> barrier;
  /// Averaging weights over the path nodes, summing to 1.
  Vector weights;
  double discount = 1.0;

  /// Throws OutOfDomain when the strike, barrier or weights are unusable and
  /// DimensionMismatch when the weights do not fit `nodes`.
  void validate(std::size_t nodes) const;
};

/// Equal weights over `nodes` path values.
Vector equal_weights(std::size_t nodes);

/// discount * (sum_ij w_ij S_i(t_j) - K)^+
double asian_basket(const PathMatrix& path, const PayoffSpec& spec);
/// asian_basket * 1{S(T) < B}; single asset only.
double asian_barrier_expiry(const PathMatrix& path, const PayoffSpec& spec);
/// asian_basket * 1{S(t_j) < B for every j}; single asset only.
double asian_barrier_complete(const PathMatrix& path, const PayoffSpec& spec);
/// Dispatches on spec.kind.
double evaluate_payoff(const PathMatrix& path, const PayoffSpec& spec);

/// Same as evaluate_payoff on raw node values (layout of PathMatrix::values).
double payoff_value(std::span<const double> values, std::size_t assets, const PayoffSpec& spec);

/// Discounted payoff of a Black-Scholes path as a function of its drivers.
class BsPayoff final : public Integrand {
 public:
  BsPayoff(const BsModel& model, PayoffSpec spec);

  [[nodiscard]] std::size_t dim() const override { return model_->dim(); }
  [[nodiscard]] std::size_t scratch_size() const override { return model_->dim(); }
  double operator()(std::span<const double> z, std::span<double> scratch) const override;

 private:
  const BsModel* model_;
  PayoffSpec spec_;
};

/// Discounted payoff of a CIR Euler path on its monitored nodes.
class CirPayoff final : public Integrand {
 public:
  CirPayoff(CirParams params, PayoffSpec spec);

  [[nodiscard]] std::size_t dim() const override { return params_.steps; }
  [[nodiscard]] std::size_t scratch_size() const override { return 2 * params_.steps + 1; }
  double operator()(std::span<const double> z, std::span<double> scratch) const override;

 private:
  CirParams params_;
  PayoffSpec spec_;
  std::size_t first_node_;
};

}  // namespace stratmc
