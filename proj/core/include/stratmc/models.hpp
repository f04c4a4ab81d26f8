#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stratmc/linalg.hpp"

namespace stratmc {

using linalg::Matrix;
using linalg::Vector;

/// Prices at (asset, time) nodes. Node k (0-based) holds asset k % M at time
/// index k / M, the same layout as the drivers of the multi-asset model.
struct PathMatrix {
  std::size_t assets = 1;
  std::size_t times = 0;
  std::vector<double> values;
  /// Set when a CIR step had to floor a negative value under the square root.
  bool floored = false;

  [[nodiscard]] double at(std::size_t asset, std::size_t time) const {
    return values[time * assets + asset];
  }
};

/// 1-based asset index k1 = (k-1) mod M + 1 of 1-based node k.
inline std::size_t asset_of(std::size_t k, std::size_t m) { return (k - 1) % m + 1; }
/// 1-based time index k2 = floor((k-1)/M) + 1 of 1-based node k.
inline std::size_t time_of(std::size_t k, std::size_t m) { return (k - 1) / m + 1; }

/// Multi-asset Black-Scholes inputs.
struct BsParams {
  Vector spots;
  Vector vols;
  Matrix correlation;
  double rate = 0.0;
  /// Monitoring dates 0 < t_1 < ... < t_N.
  Vector grid;
  /// Averaging weights w_ij in node layout (size M*N), summing to 1.
  Vector weights;

  [[nodiscard]] std::size_t assets() const noexcept { return spots.size(); }
  [[nodiscard]] std::size_t times() const noexcept { return grid.size(); }
  [[nodiscard]] double maturity() const { return grid.back(); }
  /// Throws DimensionMismatch / OutOfDomain / NonIncreasingGrid.
  void validate() const;

  /// One asset on a regular grid of `steps` dates up to `maturity`, equal weights.
  static BsParams single_asset(double spot, double vol, double rate, double maturity,
                               std::size_t steps);
  /// Equicorrelated basket on a regular grid, equal weights 1/(M N).
  static BsParams basket(Vector spots, Vector vols, double rho, double rate, double maturity,
                         std::size_t steps);
};

/// Exact lognormal sampling at the grid nodes:
/// S_k = exp(ln S_{k1}(0) + (r - sigma_{k1}^2 / 2) t_{k2} + (C eps)_k),
/// with C the Cholesky factor of Sigma_B (x) Sigma_A.
class BsModel {
 public:
  explicit BsModel(BsParams params);

  [[nodiscard]] const BsParams& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t dim() const noexcept { return params_.assets() * params_.times(); }
  [[nodiscard]] const linalg::SymmetricMatrix& covariance() const noexcept { return covariance_; }
  [[nodiscard]] const linalg::SymmetricMatrix& time_covariance() const noexcept {
    return time_covariance_;
  }
  [[nodiscard]] const linalg::LowerTriangularFactor& factor() const noexcept { return factor_; }
  /// mu_k = ln(w_k S_{k1}(0)) + (r - sigma_{k1}^2 / 2) t_{k2}; -inf where w_k = 0.
  [[nodiscard]] Vector mu() const;
  [[nodiscard]] double discount() const;

  /// Node prices for drivers eps; out has dim() entries.
  void path(std::span<const double> eps, std::span<double> out) const;
  [[nodiscard]] PathMatrix path(std::span<const double> eps) const;
  /// g(eps) = sum_k w_k S_k(eps), undiscounted. `scratch` needs dim() entries.
  [[nodiscard]] double basket(std::span<const double> eps, std::span<double> scratch) const;
  /// Gradient of basket(): C^T (w o S(eps)).
  [[nodiscard]] Vector gradient(std::span<const double> eps) const;

 private:
  BsParams params_;
  linalg::SymmetricMatrix time_covariance_;
  linalg::SymmetricMatrix covariance_;
  linalg::LowerTriangularFactor factor_;
  Vector log_forward_;
};

/// g(eps) = sum_k exp(mu_k + (C eps)_k).
double bs_basket_g(std::span<const double> eps, const BsModel& model);

/// Which Euler nodes enter the arithmetic average of a CIR path.
enum class CirMonitoring {
  /// S_1 .. S_N
  StepEnd,
  /// S_0 .. S_{N-1}
  StepStart,
};

struct CirParams {
  double s0 = 100.0;
  double alpha = 1.5;
  double mu = 100.0;
  double sigma = 8.0;
  double rate = 0.05;
  std::size_t steps = 64;
  double horizon = 1.0;
  CirMonitoring monitoring = CirMonitoring::StepEnd;

  [[nodiscard]] double dt() const { return horizon / static_cast<double>(steps); }
  /// Throws InvalidFeller when 2 alpha mu <= sigma^2 (skipped if !require_feller)
  /// and OutOfDomain for non-positive inputs.
  void validate(bool require_feller = true) const;
  /// Euler node indices averaged by the payoff.
  [[nodiscard]] std::vector<std::size_t> monitored_nodes() const;
};

/// Euler nodes S_0..S_N (out has N+1 entries), square root floored at zero.
/// Returns true when flooring occurred.
bool cir_euler_nodes(std::span<const double> z, const CirParams& params, std::span<double> out);
/// Monitored values of the Euler path as a one-asset PathMatrix.
PathMatrix cir_euler_path(std::span<const double> z, const CirParams& params);
/// Zero-noise nodes (1 - alpha dt)^j (S_0 - mu) + mu, j = 0..N.
Vector cir_zero_noise_path(const CirParams& params);
/// J(j-1, i-1) = dS_j / dZ_i at zero noise, j, i = 1..N (lower triangular).
/// Throws NegativePathValue when a zero-noise node is not positive.
Matrix cir_sensitivity(const CirParams& params);
/// Gradient of the monitored average with respect to z, by forward recursion.
Vector cir_average_gradient(std::span<const double> z, const CirParams& params);

}  // namespace stratmc
