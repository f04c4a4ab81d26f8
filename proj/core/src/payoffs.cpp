#include "stratmc/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratmc/error.hpp"

namespace stratmc {

std::string_view to_string(PayoffKind kind) noexcept {
  switch (kind) {
    case PayoffKind::AsianBasket:
      return "asian-basket";
    case PayoffKind::AsianBarrierExpiry:
      return "asian-barrier-expiry";
    case PayoffKind::AsianBarrierComplete:
      return "asian-barrier-complete";
  }
  return "?";
}

PayoffKind parse_payoff_kind(std::string_view name) {
  for (PayoffKind k : {PayoffKind::AsianBasket, PayoffKind::AsianBarrierExpiry,
                       PayoffKind::AsianBarrierComplete})
    if (to_string(k) == name) return k;
  throw Error(ErrorCode::ConfigInvalid, "unknown payoff kind '" + std::string(name) + "'");
}

void PayoffSpec::validate(std::size_t nodes) const {
  if (!(strike > 0.0)) throw Error(ErrorCode::OutOfDomain, "strike must be positive");
  if (kind == PayoffKind::AsianBasket) {
    if (barrier) throw Error(ErrorCode::OutOfDomain, "plain Asian payoff takes no barrier");
  } else {
    if (!barrier) throw Error(ErrorCode::OutOfDomain, "barrier payoff needs a barrier level");
    if (!(*barrier > strike))
      throw Error(ErrorCode::OutOfDomain, "barrier must be above the strike");
  }
  if (weights.size() != nodes)
    throw Error(ErrorCode::DimensionMismatch,
                "payoff has " + std::to_string(weights.size()) + " weights for " +
                    std::to_string(nodes) + " path nodes");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::OutOfDomain, "payoff weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::OutOfDomain, "payoff weights must sum to 1");
  if (!(discount > 0.0)) throw Error(ErrorCode::OutOfDomain, "discount factor must be positive");
}

Vector equal_weights(std::size_t nodes) {
  return Vector(nodes, 1.0 / static_cast<double>(nodes));
}

double payoff_value(std::span<const double> values, std::size_t assets, const PayoffSpec& spec) {
  double avg = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) avg += spec.weights[k] * values[k];
  if (!(avg > spec.strike)) return 0.0;
  const double b = spec.barrier.value_or(0.0);
  switch (spec.kind) {
    case PayoffKind::AsianBasket:
      break;
    case PayoffKind::AsianBarrierExpiry:
      if (assets != 1) throw Error(ErrorCode::DimensionMismatch, "barrier payoffs are single-asset");
      if (!(values.back() < b)) return 0.0;
      break;
    case PayoffKind::AsianBarrierComplete:
      if (assets != 1) throw Error(ErrorCode::DimensionMismatch, "barrier payoffs are single-asset");
      if (!std::all_of(values.begin(), values.end(), [b](double s) { return s < b; })) return 0.0;
      break;
  }
  return spec.discount * (avg - spec.strike);
}

namespace {

double checked(const PathMatrix& path, const PayoffSpec& spec, PayoffKind kind) {
  if (spec.kind != kind) throw Error(ErrorCode::OutOfDomain, "payoff spec has a different kind");
  if (spec.weights.size() != path.values.size())
    throw Error(ErrorCode::DimensionMismatch, "payoff weights do not match the path");
  return payoff_value(path.values, path.assets, spec);
}

}  // namespace

double asian_basket(const PathMatrix& path, const PayoffSpec& spec) {
  return checked(path, spec, PayoffKind::AsianBasket);
}

double asian_barrier_expiry(const PathMatrix& path, const PayoffSpec& spec) {
  return checked(path, spec, PayoffKind::AsianBarrierExpiry);
}

double asian_barrier_complete(const PathMatrix& path, const PayoffSpec& spec) {
  return checked(path, spec, PayoffKind::AsianBarrierComplete);
}

double evaluate_payoff(const PathMatrix& path, const PayoffSpec& spec) {
  return checked(path, spec, spec.kind);
}

BsPayoff::BsPayoff(const BsModel& model, PayoffSpec spec) : model_(&model), spec_(std::move(spec)) {
  spec_.validate(model.dim());
  if (spec_.kind != PayoffKind::AsianBasket && model.params().assets() != 1)
    throw Error(ErrorCode::DimensionMismatch, "barrier payoffs are single-asset");
}

double BsPayoff::operator()(std::span<const double> z, std::span<double> scratch) const {
  const auto s = scratch.first(model_->dim());
  model_->path(z, s);
  return payoff_value(s, model_->params().assets(), spec_);
}

CirPayoff::CirPayoff(CirParams params, PayoffSpec spec)
    : params_(params),
      spec_(std::move(spec)),
      first_node_(params.monitoring == CirMonitoring::StepEnd ? 1 : 0) {
  params_.validate();
  spec_.validate(params_.steps);
}

double CirPayoff::operator()(std::span<const double> z, std::span<double> scratch) const {
  const auto nodes = scratch.first(params_.steps + 1);
  cir_euler_nodes(z, params_, nodes);
  return payoff_value(nodes.subspan(first_node_, params_.steps), 1, spec_);
}

}  // namespace stratmc
