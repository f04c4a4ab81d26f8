#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stratmc::linalg {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  /// Builds a matrix whose columns are the given vectors (all the same length).
  static Matrix from_columns(std::span<const Vector> columns);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }
  [[nodiscard]] Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// m * v
Vector multiply(const Matrix& m, std::span<const double> v);
/// m^T * v
Vector multiply_transposed(const Matrix& m, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);
double frobenius_norm(const Matrix& m);
/// ||approx - reference||_F / ||reference||_F
double relative_frobenius_error(const Matrix& approx, const Matrix& reference);

/// Flips v so that its largest-magnitude component (first one on ties) is positive.
void normalize_sign(std::span<double> v);
/// Returns v / ||v||. Throws ZeroVector.
Vector normalized(std::span<const double> v);

/// Square matrix with entries(i,j) == entries(j,i) exactly.
class SymmetricMatrix {
 public:
  /// Throws DimensionMismatch when `m` is not square or not exactly symmetric.
  explicit SymmetricMatrix(Matrix m);

  [[nodiscard]] std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] double trace() const;

 private:
  Matrix m_;
};

/// Lower-triangular C with C C^T equal to the factored matrix.
class LowerTriangularFactor {
 public:
  explicit LowerTriangularFactor(Matrix m);

  [[nodiscard]] std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }

  /// out = C * v, exploiting the triangular structure.
  void apply(std::span<const double> v, std::span<double> out) const;
  /// C^T * v
  [[nodiscard]] Vector apply_transposed(std::span<const double> v) const;

 private:
  Matrix m_;
};

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // column i pairs with values[i]
};

struct GramSchmidtResult {
  std::vector<Vector> basis;  // orthonormal f_i
  Vector norms;               // ||f'_i|| before normalization
};

/// Throws NotPositiveDefinite when a pivot falls below 1e-12 * max diagonal.
LowerTriangularFactor cholesky(const SymmetricMatrix& m);

/// Brownian autocovariance min(t_j, t_n) on a strictly increasing positive grid.
SymmetricMatrix bm_covariance(std::span<const double> grid);

/// Block (j, n) of the result is b(j, n) * a.
SymmetricMatrix kronecker(const SymmetricMatrix& b, const SymmetricMatrix& a);

/// Orthonormalizes the inputs in order; the first output is the first input.
/// Throws RankDeficient when some residual norm drops below 1e-10.
GramSchmidtResult gram_schmidt(std::span<const Vector> vectors);

/// Cyclic Jacobi eigensolver. Eigenvalues come back in descending order and each
/// eigenvector has its largest-magnitude component positive.
EigenDecomposition symmetric_eigen(const SymmetricMatrix& m);

/// Angle between the lines spanned by u and v, folded into [0, 90] degrees.
double angle_degrees(std::span<const double> u, std::span<const double> v);

}  // namespace stratmc::linalg
