#include "stratmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "stratmc/error.hpp"

namespace stratmc::linalg {

namespace {

constexpr double kCholeskyPivotTolerance = 1e-12;
constexpr double kRankTolerance = 1e-10;
constexpr double kJacobiTolerance = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::DimensionMismatch, what);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  if (columns.empty()) return {};
  Matrix m(columns.front().size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
  require(values.size() == rows_, "column length does not match row count");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference shape mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Vector multiply(const Matrix& m, std::span<const double> v) {
  require(m.cols() == v.size(), "matrix-vector shape mismatch");
  Vector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), v);
  return out;
}

Vector multiply_transposed(const Matrix& m, std::span<const double> v) {
  require(m.rows() == v.size(), "transposed matrix-vector shape mismatch");
  Vector out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += r[j] * v[i];
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot product length mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return std::sqrt(s);
}

double relative_frobenius_error(const Matrix& approx, const Matrix& reference) {
  return frobenius_norm(approx - reference) / frobenius_norm(reference);
}

void normalize_sign(std::span<double> v) {
  if (v.empty()) return;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
}

Vector normalized(std::span<const double> v) {
  const double n = norm(v);
  if (!(n > 0.0)) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return out;
}

SymmetricMatrix::SymmetricMatrix(Matrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), "symmetric matrix must be square");
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = i + 1; j < m_.cols(); ++j)
      if (m_(i, j) != m_(j, i))
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix is not symmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i);
  return t;
}

LowerTriangularFactor::LowerTriangularFactor(Matrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), "factor must be square");
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = i + 1; j < m_.cols(); ++j)
      require(m_(i, j) == 0.0, "factor has nonzero entries above the diagonal");
}

void LowerTriangularFactor::apply(std::span<const double> v, std::span<double> out) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = m_.data().data() + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += r[j] * v[j];
    out[i] = s;
  }
}

Vector LowerTriangularFactor::apply_transposed(std::span<const double> v) const {
  return multiply_transposed(m_, v);
}

LowerTriangularFactor cholesky(const SymmetricMatrix& m) {
  const std::size_t n = m.dim();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
  const double tol = kCholeskyPivotTolerance * max_diag;

  Matrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= c(j, k) * c(j, k);
    if (!(pivot > tol))
      throw Error(ErrorCode::NotPositiveDefinite,
                  "pivot " + std::to_string(j) + " is " + std::to_string(pivot));
    const double d = std::sqrt(pivot);
    c(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= c(i, k) * c(j, k);
      c(i, j) = s / d;
    }
  }
  return LowerTriangularFactor(std::move(c));
}

SymmetricMatrix bm_covariance(std::span<const double> grid) {
  if (grid.empty() || !(grid[0] > 0.0))
    throw Error(ErrorCode::NonIncreasingGrid, "time grid must start strictly after 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw Error(ErrorCode::NonIncreasingGrid,
                  "time grid not strictly increasing at index " + std::to_string(i));
  const std::size_t n = grid.size();
  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(j, k) = std::min(grid[j], grid[k]);
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix kronecker(const SymmetricMatrix& b, const SymmetricMatrix& a) {
  const std::size_t nb = b.dim();
  const std::size_t na = a.dim();
  Matrix k(nb * na, nb * na);
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t n = 0; n < nb; ++n)
      for (std::size_t i = 0; i < na; ++i)
        for (std::size_t m = 0; m < na; ++m) k(j * na + i, n * na + m) = b(j, n) * a(i, m);
  return SymmetricMatrix(std::move(k));
}

GramSchmidtResult gram_schmidt(std::span<const Vector> vectors) {
  GramSchmidtResult out;
  out.basis.reserve(vectors.size());
  out.norms.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    Vector f = vectors[i];
    if (i > 0) require(f.size() == vectors[0].size(), "vectors differ in length");
    // Two passes of modified Gram-Schmidt keep the basis orthonormal to roundoff.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& prev : out.basis) {
        const double proj = dot(f, prev);
        for (std::size_t k = 0; k < f.size(); ++k) f[k] -= proj * prev[k];
      }
    }
    const double n = norm(f);
    if (n < kRankTolerance)
      throw Error(ErrorCode::RankDeficient,
                  "vector " + std::to_string(i) + " is dependent on its predecessors");
    if (i > 0 || std::abs(n - 1.0) > 1e-12)
      for (double& x : f) x /= n;
    out.basis.push_back(std::move(f));
    out.norms.push_back(n);
  }
  return out;
}

EigenDecomposition symmetric_eigen(const SymmetricMatrix& sym) {
  const std::size_t n = sym.dim();
  Matrix a = sym.matrix();
  Matrix v = Matrix::identity(n);

  const double scale = std::max(frobenius_norm(a), std::numeric_limits<double>::min());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > kJacobiTolerance * scale) {
    if (++sweep > kJacobiMaxSweeps)
      throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exceeded iteration cap");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    Vector col = v.column(order[c]);
    normalize_sign(col);
    out.vectors.set_column(c, col);
  }
  return out;
}

double angle_degrees(std::span<const double> u, std::span<const double> v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (!(nu > 0.0) || !(nv > 0.0))
    throw Error(ErrorCode::ZeroVector, "angle undefined for a zero vector");
  // Kahan's form stays accurate for nearly parallel vectors, unlike acos.
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i] / nu;
    const double b = v[i] / nv;
    diff += (a - b) * (a - b);
    sum += (a + b) * (a + b);
  }
  const double theta = 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum)) * 180.0 / std::numbers::pi;
  return std::min(theta, 180.0 - theta);
}

}  // namespace stratmc::linalg
