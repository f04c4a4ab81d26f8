#include "stratmc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "stratmc/error.hpp"
#include "stratmc/format.hpp"

namespace stratmc {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kCellsPerStrike = 32;
constexpr std::uint64_t kLhsCell = 31;
/// Phase of the CIR pilot run that estimates the price covariance.
constexpr std::uint64_t kPilotPcaPhase = (std::uint64_t{1} << 23) + 1;

/// Cell ids depend only on (strike, method, allocation), so a single `price`
/// run reproduces the matching `experiment` row.
std::uint64_t cell_id(std::size_t strike_index, std::optional<Method> method,
                      AllocationRule alloc) {
  std::uint64_t local = 0;
  if (method)
    local = 1 + 2 * static_cast<std::uint64_t>(*method) +
            (alloc == AllocationRule::Optimal ? 1 : 0);
  return strike_index * kCellsPerStrike + local;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string cell_name(std::optional<Method> method, AllocationRule alloc, double strike) {
  const std::string m = method ? std::string(to_string(*method)) : "mc";
  return "cell method=" + m + " alloc=" + std::string(to_string(alloc)) +
         " strike=" + format_double(strike);
}

}  // namespace

ExperimentContext::ExperimentContext(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.model == ModelKind::Bs) bs_ = std::make_unique<BsModel>(config_.bs);
  cache_.resize(static_cast<std::size_t>(Method::TwoDirPca) + 1);
}

ExperimentContext::~ExperimentContext() = default;

std::size_t ExperimentContext::dim() const {
  return bs_ ? bs_->dim() : config_.cir.steps;
}

const MethodDirections& ExperimentContext::directions(Method method) {
  auto& slot = cache_[static_cast<std::size_t>(method)];
  if (slot) return *slot;
  const auto start = Clock::now();
  const std::size_t d = dim();

  auto one = [](Vector v) { return DirectionSet::orthogonal({std::move(v)}); };
  std::optional<DirectionSet> result;
  if (bs_) {
    const BsModel& model = *bs_;
    auto gradient = [&model](std::span<const double> z) { return model.gradient(z); };
    switch (method) {
      case Method::La: result = one(la_direction_bs(model)); break;
      case Method::Lt: result = lt_directions_bs(model, 1); break;
      case Method::Pca: result = pca_directions(model.covariance(), 1).directions; break;
      case Method::PilotPca:
        throw Error(ErrorCode::ConfigInvalid, "pilot-pca is only available for the cir model");
      case Method::LaPca:
        result = DirectionSet::general(
            {la_direction_bs(model), pca_directions(model.covariance(), 1).directions.column(0)});
        break;
      case Method::LtPca:
        result = DirectionSet::general({lt_directions_bs(model, 1).column(0),
                                        pca_directions(model.covariance(), 1).directions.column(0)});
        break;
      case Method::TwoDirLa: result = la_directions_multi(gradient, d, 2); break;
      case Method::TwoDirLt: result = lt_directions_bs(model, 2); break;
      case Method::TwoDirPca: result = pca_directions(model.covariance(), 2).directions; break;
    }
  } else {
    const CirParams& p = config_.cir;
    auto pilot = [&] {
      RandomStream stream(config_.seed, RandomStream::substream(kPilotPcaPhase, 0));
      return pilot_pca_cir(p, config_.pilot_paths, stream, config_.pilot_mapping);
    };
    auto gradient = [&p](std::span<const double> z) { return cir_average_gradient(z, p); };
    switch (method) {
      case Method::La: result = one(la_direction_cir(p)); break;
      case Method::Lt: result = lt_directions_cir(p, 1); break;
      case Method::Pca:
      case Method::PilotPca: result = one(pilot().direction); break;
      case Method::LaPca: result = DirectionSet::general({la_direction_cir(p), pilot().direction}); break;
      case Method::LtPca:
        result = DirectionSet::general({lt_directions_cir(p, 1).column(0), pilot().direction});
        break;
      case Method::TwoDirLa: result = la_directions_multi(gradient, d, 2); break;
      case Method::TwoDirLt: result = lt_directions_cir(p, 2); break;
      case Method::TwoDirPca: {
        const auto pr = pilot();
        const auto pca = pca_directions(pr.covariance, 2).directions;
        if (config_.pilot_mapping == PilotMapping::Raw) {
          result = pca;
        } else {
          const Matrix j = cir_sensitivity(p);
          std::vector<Vector> cols;
          for (const Vector& w : pca.columns())
            cols.push_back(linalg::normalized(linalg::multiply_transposed(j, w)));
          result = DirectionSet::general(std::move(cols));
        }
        break;
      }
    }
  }
  slot = std::make_unique<MethodDirections>(MethodDirections{method, std::move(*result), 0.0});
  slot->seconds = seconds_since(start);
  return *slot;
}

const linalg::Matrix& ExperimentContext::lhs_rotation() {
  if (!rotation_) {
    const DirectionSet full = bs_ ? lt_directions_bs(*bs_, bs_->dim())
                                  : lt_directions_cir(config_.cir, config_.cir.steps);
    rotation_ = Matrix::from_columns(full.columns());
  }
  return *rotation_;
}

std::unique_ptr<Integrand> ExperimentContext::integrand(double strike) const {
  PayoffSpec spec;
  spec.kind = config_.payoff;
  spec.strike = strike;
  spec.barrier = config_.barrier;
  if (bs_) {
    spec.weights = config_.bs.weights;
    spec.discount = bs_->discount();
    return std::make_unique<BsPayoff>(*bs_, std::move(spec));
  }
  spec.weights = equal_weights(config_.cir.steps);
  spec.discount = std::exp(-config_.cir.rate * config_.cir.horizon);
  return std::make_unique<CirPayoff>(config_.cir, std::move(spec));
}

ResultRow ExperimentContext::base_row(std::size_t strike_index) const {
  ResultRow row;
  row.payoff = std::string(to_string(config_.payoff));
  row.strike = config_.strikes.at(strike_index);
  row.barrier = config_.barrier;
  row.seed = config_.seed;
  return row;
}

ResultRow ExperimentContext::run_cell(std::optional<Method> method, AllocationRule alloc,
                                      std::size_t strike_index, double* seconds) {
  const double strike = config_.strikes.at(strike_index);
  try {
    const auto g = integrand(strike);
    const std::uint64_t id = cell_id(strike_index, method, alloc);
    ResultRow row = base_row(strike_index);
    EstimateReport report;
    double extra = 0.0;
    if (!method) {
      row.method = "mc";
      row.alloc = "none";
      report = plain_mc_estimate(*g, config_.samples, {config_.seed, id * 4 + 3, config_.threads});
    } else {
      const MethodDirections& dirs = directions(*method);
      extra = dirs.seconds;
      const std::size_t count = dirs.directions.count();
      const int k = count == 1 ? config_.strata : config_.strata_2d;
      auto sampler = make_sampler(dirs.directions, StratumSpec(std::vector<int>(count, k)));
      StratifiedRunOptions opts;
      opts.rule = alloc;
      opts.total = config_.samples;
      opts.pilot_fraction = config_.pilot_fraction;
      opts.exec = {config_.seed, id, config_.threads};
      report = run_stratified(*g, *sampler, opts);
      row.method = std::string(to_string(*method));
      row.alloc = std::string(to_string(alloc));
    }
    row.price = report.price;
    row.variance = report.per_draw_variance();
    row.n_samples = report.n_samples;
    row.strata = report.n_strata;
    if (seconds) *seconds = report.seconds + extra;
    return row;
  } catch (const Error& e) {
    throw Error(e.code(), cell_name(method, alloc, strike) + ": " + e.what());
  }
}

ResultRow ExperimentContext::run_lhs(std::size_t strike_index, double* seconds) {
  const double strike = config_.strikes.at(strike_index);
  try {
    const auto start = Clock::now();
    const Matrix& rotation = lhs_rotation();
    const double rotation_seconds = seconds_since(start);
    const auto g = integrand(strike);
    const std::uint64_t id = strike_index * kCellsPerStrike + kLhsCell;
    const EstimateReport report = lhs_estimate(*g, rotation, config_.samples,
                                               config_.lhs_replications,
                                               {config_.seed, id * 4 + 3, config_.threads});
    ResultRow row = base_row(strike_index);
    row.method = "lhs";
    row.alloc = "none";
    row.price = report.price;
    row.variance = report.per_draw_variance();
    row.n_samples = report.n_samples;
    row.strata = report.n_samples / config_.lhs_replications;
    if (seconds) *seconds = report.seconds + rotation_seconds;
    return row;
  } catch (const Error& e) {
    throw Error(e.code(), "cell method=lhs strike=" + format_double(strike) + ": " + e.what());
  }
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  ExperimentContext ctx(config);
  std::vector<ResultRow> rows;
  const bool timed = config.timing == TimingMode::Wall;
  for (std::size_t s = 0; s < config.strikes.size(); ++s) {
    double mc_seconds = 0.0;
    ResultRow mc = ctx.run_cell(std::nullopt, AllocationRule::Constant, s, &mc_seconds);
    if (timed) mc.time_ratio = 1.0;
    rows.push_back(mc);
    auto ratio = [&](double secs) -> std::optional<double> {
      if (!timed) return std::nullopt;
      return mc_seconds > 0.0 ? secs / mc_seconds : 0.0;
    };
    for (Method m : config.methods)
      for (AllocationRule a : config.allocations) {
        double secs = 0.0;
        ResultRow row = ctx.run_cell(m, a, s, &secs);
        row.time_ratio = ratio(secs);
        rows.push_back(std::move(row));
      }
    if (config.lhs) {
      double secs = 0.0;
      ResultRow row = ctx.run_lhs(s, &secs);
      row.time_ratio = ratio(secs);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace stratmc
