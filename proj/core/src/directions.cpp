#include "stratmc/directions.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "stratmc/error.hpp"
#include "stratmc/format.hpp"

namespace stratmc {

namespace {

constexpr double kDegenerateColumn = 1e-12;

/// Removes the components along `basis` (two passes) and normalizes. The
/// residual is compared with the input norm, so the check is scale-free.
Vector orthonormal_complement(Vector b, const std::vector<Vector>& basis) {
  const double input = linalg::norm(b);
  if (!(input > 0.0)) throw Error(ErrorCode::DegenerateColumn, "LT column vanishes");
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& a : basis) {
      const double c = linalg::dot(a, b);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= c * a[i];
    }
  const double residual = linalg::norm(b);
  if (residual < kDegenerateColumn * input)
    throw Error(ErrorCode::DegenerateColumn, "LT column lies in the span of earlier columns");
  for (double& x : b) x /= residual;
  return b;
}

Vector expansion_point(const std::vector<Vector>& columns, std::size_t dim) {
  Vector z(dim, 0.0);
  for (const Vector& a : columns)
    for (std::size_t i = 0; i < dim; ++i) z[i] += a[i];
  return z;
}

Vector unit_gradient(Vector g) {
  const double n = linalg::norm(g);
  if (!(n >= 1e-14) || !std::isfinite(n))
    throw Error(ErrorCode::DegenerateGradient, "gradient norm below 1e-14");
  for (double& x : g) x /= n;
  linalg::normalize_sign(g);
  return g;
}

}  // namespace

PcaResult pca_directions(const linalg::SymmetricMatrix& sigma, std::size_t m) {
  if (m == 0 || m > sigma.dim())
    throw Error(ErrorCode::DimensionMismatch, "PCA count must lie in 1..dim");
  auto eig = linalg::symmetric_eigen(sigma);
  std::vector<Vector> cols;
  double top = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cols.push_back(eig.vectors.column(i));
    top += eig.values[i];
  }
  double total = 0.0;
  for (double l : eig.values) total += l;
  return {DirectionSet::orthogonal(std::move(cols)), eig.values,
          total > 0.0 ? top / total : 0.0};
}

Vector la_direction_bs(const BsModel& model) {
  const Vector zero(model.dim(), 0.0);
  return unit_gradient(model.gradient(zero));
}

DirectionSet la_directions_multi(const GradientFn& gradient, std::size_t dim, std::size_t count) {
  if (count == 0 || count > dim)
    throw Error(ErrorCode::DimensionMismatch, "direction count must lie in 1..dim");
  std::vector<Vector> cols;
  Vector point(dim, 0.0);
  for (std::size_t m = 0; m < count; ++m) {
    Vector v = unit_gradient(gradient(point));
    point = v;
    cols.push_back(std::move(v));
  }
  return DirectionSet::general(std::move(cols));
}

DirectionSet lt_directions_bs(const BsModel& model, std::size_t p) {
  const std::size_t d = model.dim();
  if (p == 0 || p > d) throw Error(ErrorCode::DimensionMismatch, "LT column count must lie in 1..MN");
  std::vector<Vector> cols;
  for (std::size_t step = 0; step < p; ++step) {
    const Vector point = expansion_point(cols, d);
    Vector b = model.gradient(point);
    if (step == 0) {
      cols.push_back(unit_gradient(std::move(b)));
    } else {
      cols.push_back(orthonormal_complement(std::move(b), cols));
    }
  }
  return DirectionSet::orthogonal(std::move(cols));
}

LtCirWorkspace LtCirWorkspace::build(const CirParams& params, std::span<const double> z) {
  const std::size_t n = params.steps;
  if (z.size() != n) throw Error(ErrorCode::DimensionMismatch, "expansion point needs N entries");
  const double dt = params.dt();
  LtCirWorkspace ws;
  ws.path.resize(n + 1);
  cir_euler_nodes(z, params, ws.path);
  for (std::size_t j = 0; j < n; ++j)
    if (!(ws.path[j] > 0.0))
      throw Error(ErrorCode::NegativePathValue,
                  "CIR node " + std::to_string(j) + " is not positive at the expansion point");

  ws.beta.resize(n);
  for (std::size_t j = 0; j < n; ++j) ws.beta[j] = params.sigma * std::sqrt(dt * ws.path[j]);
  ws.alpha.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    ws.alpha[i] = 1.0 - params.alpha * dt +
                  0.5 * params.sigma * std::sqrt(dt / ws.path[i]) * z[i];  // Z_{i+1}

  ws.weights = Matrix(n, n);
  for (std::size_t m = 1; m <= n; ++m) {
    double w = ws.beta[m - 1];
    ws.weights(m - 1, m - 1) = w;
    for (std::size_t j = m; j < n; ++j) {
      w = ws.alpha[j] * w;  // w_m(j+1) = alpha_j w_m(j)
      ws.weights(m - 1, j) = w;
    }
  }

  // h_j = 1 + alpha_j h_{j+1}, h_N = 1, so t_j = beta_{j-1} h_j.
  ws.t.resize(n);
  double h = 1.0;
  ws.t[n - 1] = ws.beta[n - 1] * h;
  for (std::size_t j = n - 1; j >= 1; --j) {
    h = 1.0 + ws.alpha[j] * h;
    ws.t[j - 1] = ws.beta[j - 1] * h;
  }
  return ws;
}

DirectionSet lt_directions_cir(const CirParams& params, std::size_t p, bool require_feller) {
  params.validate(require_feller);
  const std::size_t n = params.steps;
  if (p == 0 || p > n) throw Error(ErrorCode::DimensionMismatch, "LT column count must lie in 1..N");
  std::vector<Vector> cols;
  for (std::size_t step = 0; step < p; ++step) {
    const Vector point = expansion_point(cols, n);
    const LtCirWorkspace ws = LtCirWorkspace::build(params, point);
    if (step == 0) {
      cols.push_back(unit_gradient(ws.t));
    } else {
      cols.push_back(orthonormal_complement(ws.t, cols));
    }
  }
  return DirectionSet::orthogonal(std::move(cols));
}

Vector la_direction_cir(const CirParams& params, bool require_feller) {
  params.validate(require_feller);
  const Matrix j = cir_sensitivity(params);
  const std::size_t n = params.steps;
  Vector g(n, 0.0);
  for (std::size_t node : params.monitored_nodes()) {
    if (node == 0) continue;  // S_0 does not depend on the drivers
    const auto row = j.row(node - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] += row[i];
  }
  return unit_gradient(std::move(g));
}

PilotPcaResult pilot_pca_cir(const CirParams& params, std::size_t pilot_n, RandomStream& stream,
                             PilotMapping mapping, bool require_feller) {
  params.validate(require_feller);
  if (pilot_n < 2) throw Error(ErrorCode::InsufficientSamples, "pilot needs at least 2 paths");
  const std::size_t n = params.steps;
  Vector z(n);
  Vector nodes(n + 1);
  Vector mean(n, 0.0);
  Matrix m2(n, n);
  // Running mean and co-moment (Welford), upper triangle only.
  for (std::size_t s = 0; s < pilot_n; ++s) {
    stream.fill_normal(z);
    cir_euler_nodes(z, params, nodes);
    const double count = static_cast<double>(s + 1);
    Vector delta(n);
    for (std::size_t i = 0; i < n; ++i) {
      delta[i] = nodes[i + 1] - mean[i];
      mean[i] += delta[i] / count;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double after = nodes[i + 1] - mean[i];
      for (std::size_t k = i; k < n; ++k) m2(i, k) += after * delta[k];
    }
  }
  Matrix cov(n, n);
  double trace = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      cov(i, k) = m2(i, k) / static_cast<double>(pilot_n - 1);
      cov(k, i) = cov(i, k);
    }
    trace += cov(i, i);
    scale += mean[i] * mean[i];
  }
  if (!(trace > 1e-24 * scale) || !(trace > 0.0))
    throw Error(ErrorCode::DegenerateCovariance, "pilot paths have no variance");
  linalg::SymmetricMatrix sym(std::move(cov));
  const auto eig = linalg::symmetric_eigen(sym);
  Vector w = eig.vectors.column(0);
  Vector direction = w;
  if (mapping == PilotMapping::Pullback) {
    direction = linalg::multiply_transposed(cir_sensitivity(params), w);
    direction = unit_gradient(std::move(direction));
  }
  return {std::move(direction), std::move(w), std::move(sym)};
}

std::string export_directions(const DirectionSet& directions) {
  std::string out;
  for (std::size_t c = 0; c < directions.count(); ++c) {
    if (c > 0) out += '\n';
    for (double x : directions.column(c)) {
      out += format_double(x);
      out += '\n';
    }
  }
  return out;
}

std::vector<Vector> import_directions(const std::string& text) {
  std::vector<Vector> cols(1);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      if (!cols.back().empty()) cols.emplace_back();
      continue;
    }
    cols.back().push_back(parse_double(line));
  }
  if (cols.back().empty()) cols.pop_back();
  return cols;
}

}  // namespace stratmc
