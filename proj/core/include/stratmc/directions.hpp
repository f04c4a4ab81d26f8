#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stratmc/linalg.hpp"
#include "stratmc/models.hpp"
#include "stratmc/random.hpp"
#include "stratmc/sampling.hpp"

namespace stratmc {

struct PcaResult {
  DirectionSet directions;
  Vector eigenvalues;
  /// sum of the first m eigenvalues over the trace.
  double explained_ratio = 0.0;
};

/// Top-m eigenvectors of sigma (orthogonal set). Ties in the spectrum are
/// broken by the eigensolver's fixed ordering.
PcaResult pca_directions(const linalg::SymmetricMatrix& sigma, std::size_t m);

/// Normalized gradient of the basket function at zero noise, C^T u with
/// u_k = exp(mu_k). Throws DegenerateGradient when the gradient vanishes.
Vector la_direction_bs(const BsModel& model);

using GradientFn = std::function<Vector(std::span<const double>)>;

/// v_1 = grad(0)/|grad(0)|, v_{m+1} = grad(v_m)/|grad(v_m)|. The directions are
/// not orthogonalized; DependentDirections when they are (nearly) parallel.
DirectionSet la_directions_multi(const GradientFn& gradient, std::size_t dim, std::size_t count);

/// Orthogonal LT columns for the basket function. Column p is C^T u^(p) with
/// u^(p) the weighted node prices at the expansion point sum_{k<p} A_k,
/// projected off the earlier columns. Throws DegenerateColumn.
DirectionSet lt_directions_bs(const BsModel& model, std::size_t p);

/// Coefficients of one LT step for the CIR Euler scheme, evaluated on the path
/// induced by the expansion point. Indices follow the scheme: alpha[i] holds
/// alpha_i for i = 1..N-1 (alpha[0] unused), beta[j] holds beta_j for j = 0..N-1,
/// t[j-1] holds t_j.
struct LtCirWorkspace {
  Vector path;   // S_0..S_N at the expansion point
  Vector alpha;  // alpha_i = 1 - a dt + sigma/2 sqrt(dt / S_i) Z_{i+1}
  Vector beta;   // beta_j = sigma sqrt(dt S_j)
  /// weights(m-1, j-1) = w_m(j) = beta_{m-1} prod_{i=m}^{j-1} alpha_i, m <= j.
  Matrix weights;
  Vector t;      // t_j = beta_{j-1} (1 + sum_{l=j}^{N-1} prod_{i=j}^{l} alpha_i)

  /// Builds every field for expansion point z (Z-space, length N).
  static LtCirWorkspace build(const CirParams& params, std::span<const double> z);
};

/// Orthogonal LT columns for the average of S_1..S_N. Throws InvalidFeller,
/// NegativePathValue, DegenerateColumn.
DirectionSet lt_directions_cir(const CirParams& params, std::size_t p,
                               bool require_feller = true);

/// Normalized sum of the zero-noise gradients of the monitored nodes.
Vector la_direction_cir(const CirParams& params, bool require_feller = true);

enum class PilotMapping {
  /// Use the price-space eigenvector itself as the driver direction.
  Raw,
  /// Map it through the zero-noise sensitivity: J^T w, normalized.
  Pullback,
};

struct PilotPcaResult {
  Vector direction;
  Vector price_eigenvector;
  linalg::SymmetricMatrix covariance;
};

/// Leading eigenvector of the sample covariance of the Euler nodes S_1..S_N
/// over `pilot_n` simulated paths. Throws DegenerateCovariance.
PilotPcaResult pilot_pca_cir(const CirParams& params, std::size_t pilot_n, RandomStream& stream,
                             PilotMapping mapping = PilotMapping::Raw,
                             bool require_feller = true);

inline constexpr std::size_t kDefaultPilotPaths = 2000;

/// Columns as plain text: one value per line with 17 significant digits, a
/// blank line between columns.
std::string export_directions(const DirectionSet& directions);
/// Parses export_directions output back into columns.
std::vector<Vector> import_directions(const std::string& text);

}  // namespace stratmc
