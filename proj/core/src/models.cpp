#include "stratmc/models.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stratmc/error.hpp"

namespace stratmc {

namespace {

Vector regular_grid(double maturity, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::OutOfDomain, "grid needs at least one date");
  Vector t(steps);
  for (std::size_t j = 0; j < steps; ++j)
    t[j] = maturity * static_cast<double>(j + 1) / static_cast<double>(steps);
  return t;
}

linalg::SymmetricMatrix asset_covariance(const BsParams& p) {
  const std::size_t m = p.assets();
  Matrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i; k < m; ++k) {
      a(i, k) = p.vols[i] * p.correlation(i, k) * p.vols[k];
      a(k, i) = a(i, k);
    }
  return linalg::SymmetricMatrix(std::move(a));
}

}  // namespace

void BsParams::validate() const {
  const std::size_t m = assets();
  const std::size_t n = times();
  if (m == 0 || n == 0) throw Error(ErrorCode::DimensionMismatch, "model needs assets and dates");
  if (vols.size() != m) throw Error(ErrorCode::DimensionMismatch, "one volatility per asset");
  if (correlation.rows() != m || correlation.cols() != m)
    throw Error(ErrorCode::DimensionMismatch, "correlation matrix must be M x M");
  if (weights.size() != m * n)
    throw Error(ErrorCode::DimensionMismatch, "weights need one entry per (asset, date) node");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(spots[i] > 0.0)) throw Error(ErrorCode::OutOfDomain, "spot prices must be positive");
    if (!(vols[i] > 0.0)) throw Error(ErrorCode::OutOfDomain, "volatilities must be positive");
    if (correlation(i, i) != 1.0)
      throw Error(ErrorCode::OutOfDomain, "correlation matrix needs a unit diagonal");
    for (std::size_t k = 0; k < m; ++k) {
      if (correlation(i, k) != correlation(k, i))
        throw Error(ErrorCode::OutOfDomain, "correlation matrix must be symmetric");
      if (std::abs(correlation(i, k)) > 1.0)
        throw Error(ErrorCode::OutOfDomain, "correlations must lie in [-1, 1]");
    }
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::OutOfDomain, "averaging weights must be >= 0");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw Error(ErrorCode::OutOfDomain, "averaging weights must sum to 1");
  if (!std::isfinite(rate)) throw Error(ErrorCode::OutOfDomain, "rate must be finite");
  linalg::bm_covariance(grid);  // grid checks
}

BsParams BsParams::single_asset(double spot, double vol, double rate, double maturity,
                                std::size_t steps) {
  BsParams p;
  p.spots = {spot};
  p.vols = {vol};
  p.correlation = Matrix::identity(1);
  p.rate = rate;
  p.grid = regular_grid(maturity, steps);
  p.weights.assign(steps, 1.0 / static_cast<double>(steps));
  return p;
}

BsParams BsParams::basket(Vector spots, Vector vols, double rho, double rate, double maturity,
                          std::size_t steps) {
  BsParams p;
  const std::size_t m = spots.size();
  p.spots = std::move(spots);
  p.vols = std::move(vols);
  p.correlation = Matrix(m, m, rho);
  for (std::size_t i = 0; i < m; ++i) p.correlation(i, i) = 1.0;
  p.rate = rate;
  p.grid = regular_grid(maturity, steps);
  p.weights.assign(m * steps, 1.0 / static_cast<double>(m * steps));
  return p;
}

BsModel::BsModel(BsParams params)
    : params_((params.validate(), std::move(params))),
      time_covariance_(linalg::bm_covariance(params_.grid)),
      covariance_(linalg::kronecker(time_covariance_, asset_covariance(params_))),
      factor_(linalg::cholesky(covariance_)) {
  const std::size_t m = params_.assets();
  log_forward_.resize(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const std::size_t i = k % m;
    const double t = params_.grid[k / m];
    const double s = params_.vols[i];
    log_forward_[k] = std::log(params_.spots[i]) + (params_.rate - 0.5 * s * s) * t;
  }
}

Vector BsModel::mu() const {
  Vector out(dim());
  for (std::size_t k = 0; k < dim(); ++k)
    out[k] = params_.weights[k] > 0.0 ? std::log(params_.weights[k]) + log_forward_[k]
                                      : -std::numeric_limits<double>::infinity();
  return out;
}

double BsModel::discount() const { return std::exp(-params_.rate * params_.maturity()); }

void BsModel::path(std::span<const double> eps, std::span<double> out) const {
  if (eps.size() != dim() || out.size() != dim())
    throw Error(ErrorCode::DimensionMismatch, "driver length must equal M * N");
  factor_.apply(eps, out);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::exp(log_forward_[k] + out[k]);
}

PathMatrix BsModel::path(std::span<const double> eps) const {
  PathMatrix p{params_.assets(), params_.times(), Vector(dim()), false};
  path(eps, p.values);
  return p;
}

double BsModel::basket(std::span<const double> eps, std::span<double> scratch) const {
  path(eps, scratch.first(dim()));
  double g = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) g += params_.weights[k] * scratch[k];
  return g;
}

Vector BsModel::gradient(std::span<const double> eps) const {
  Vector s(dim());
  path(eps, s);
  for (std::size_t k = 0; k < dim(); ++k) s[k] *= params_.weights[k];
  return factor_.apply_transposed(s);
}

double bs_basket_g(std::span<const double> eps, const BsModel& model) {
  Vector scratch(model.dim());
  return model.basket(eps, scratch);
}

void CirParams::validate(bool require_feller) const {
  if (steps == 0) throw Error(ErrorCode::OutOfDomain, "CIR grid needs at least one step");
  if (!(horizon > 0.0)) throw Error(ErrorCode::OutOfDomain, "CIR horizon must be positive");
  if (!(s0 > 0.0)) throw Error(ErrorCode::OutOfDomain, "CIR initial value must be positive");
  if (!std::isfinite(rate)) throw Error(ErrorCode::OutOfDomain, "rate must be finite");
  if (require_feller) {
    if (!(alpha > 0.0 && mu > 0.0 && sigma > 0.0))
      throw Error(ErrorCode::OutOfDomain, "CIR alpha, mu and sigma must be positive");
    if (!(2.0 * alpha * mu > sigma * sigma))
      throw Error(ErrorCode::InvalidFeller, "CIR parameters violate 2 alpha mu > sigma^2");
  } else if (!(alpha >= 0.0 && sigma >= 0.0)) {
    throw Error(ErrorCode::OutOfDomain, "CIR alpha and sigma must be non-negative");
  }
}

std::vector<std::size_t> CirParams::monitored_nodes() const {
  std::vector<std::size_t> nodes(steps);
  const std::size_t first = monitoring == CirMonitoring::StepEnd ? 1 : 0;
  for (std::size_t j = 0; j < steps; ++j) nodes[j] = first + j;
  return nodes;
}

bool cir_euler_nodes(std::span<const double> z, const CirParams& params, std::span<double> out) {
  const std::size_t n = params.steps;
  if (z.size() != n || out.size() != n + 1)
    throw Error(ErrorCode::DimensionMismatch, "CIR path needs N drivers and N+1 nodes");
  const double dt = params.dt();
  const double drift = 1.0 - params.alpha * dt;
  const double mean_pull = params.alpha * params.mu * dt;
  const double vol = params.sigma * std::sqrt(dt);
  bool floored = false;
  double s = params.s0;
  out[0] = s;
  for (std::size_t j = 0; j < n; ++j) {
    double root = 0.0;
    if (s > 0.0) {
      root = std::sqrt(s);
    } else {
      floored = floored || s < 0.0;
    }
    s = drift * s + mean_pull + vol * root * z[j];
    out[j + 1] = s;
  }
  return floored;
}

PathMatrix cir_euler_path(std::span<const double> z, const CirParams& params) {
  Vector nodes(params.steps + 1);
  PathMatrix p{1, params.steps, Vector(params.steps), false};
  p.floored = cir_euler_nodes(z, params, nodes);
  const auto idx = params.monitored_nodes();
  for (std::size_t j = 0; j < idx.size(); ++j) p.values[j] = nodes[idx[j]];
  return p;
}

Vector cir_zero_noise_path(const CirParams& params) {
  Vector s(params.steps + 1);
  const double c = 1.0 - params.alpha * params.dt();
  for (std::size_t j = 0; j <= params.steps; ++j)
    s[j] = std::pow(c, static_cast<double>(j)) * (params.s0 - params.mu) + params.mu;
  return s;
}

Matrix cir_sensitivity(const CirParams& params) {
  const std::size_t n = params.steps;
  const double dt = params.dt();
  const double c = 1.0 - params.alpha * dt;
  const Vector s = cir_zero_noise_path(params);
  Matrix j_mat(n, n);
  for (std::size_t i = 1; i <= n; ++i) {
    if (!(s[i - 1] > 0.0))
      throw Error(ErrorCode::NegativePathValue,
                  "zero-noise CIR node " + std::to_string(i - 1) + " is not positive");
    const double beta = params.sigma * std::sqrt(dt * s[i - 1]);
    double factor = beta;
    for (std::size_t j = i; j <= n; ++j) {
      j_mat(j - 1, i - 1) = factor;
      factor *= c;
    }
  }
  return j_mat;
}

Vector cir_average_gradient(std::span<const double> z, const CirParams& params) {
  const std::size_t n = params.steps;
  if (z.size() != n) throw Error(ErrorCode::DimensionMismatch, "CIR gradient needs N drivers");
  Vector nodes(n + 1);
  cir_euler_nodes(z, params, nodes);
  const double dt = params.dt();
  const double drift = 1.0 - params.alpha * dt;
  const double vol = params.sigma * std::sqrt(dt);
  const auto monitored = params.monitored_nodes();
  std::vector<char> in_average(n + 1, 0);
  for (std::size_t j : monitored) in_average[j] = 1;
  const double scale = 1.0 / static_cast<double>(monitored.size());

  // Column i of the Jacobian: dS_i/dZ_i = vol sqrt(S_{i-1}), then propagate
  // dS_j = (drift + vol Z_j / (2 sqrt(S_{j-1}))) dS_{j-1}.
  Vector grad(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double prev = nodes[i - 1];
    if (!(prev > 0.0)) continue;  // floored root: no sensitivity to Z_i
    double d = vol * std::sqrt(prev);
    double acc = in_average[i] ? d : 0.0;
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double sj = nodes[j - 1];
      const double slope = sj > 0.0 ? drift + vol * z[j - 1] / (2.0 * std::sqrt(sj)) : drift;
      d *= slope;
      if (in_average[j]) acc += d;
    }
    grad[i - 1] = acc * scale;
  }
  return grad;
}

}  // namespace stratmc
