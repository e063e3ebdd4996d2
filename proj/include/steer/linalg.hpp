#pragma once

// Small dense real linear algebra for the <=3x3 correlation matrices and
// the 3-vectors of the Bloch sphere. Everything is a value type.

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace steer {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

/// Row-major real matrix with at most 3 rows and 3 columns.
class Matrix {
 public:
  static constexpr std::size_t kMaxDim = 3;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * kMaxDim + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * kMaxDim + j]; }

  Matrix transpose() const;
  Vec3 row(std::size_t i) const;
  Vec3 col(std::size_t j) const;

  /// Largest absolute entry of (*this - other); shapes must agree.
  double max_abs_diff(const Matrix& other) const;
  double frobenius_norm() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::array<double, kMaxDim * kMaxDim> data_{};
};

Vec3 operator*(const Matrix& a, const Vec3& v);

/// Outer product u v^T of two column vectors (each of length <= 3).
Matrix outer(std::span<const double> u, std::span<const double> v);

/// Frobenius inner product <a, b> = sum_ij a_ij b_ij.
double frobenius_dot(const Matrix& a, const Matrix& b);

double determinant3(const Matrix& a);

// ---------------------------------------------------------------------------
// Symmetric eigensolver (cyclic Jacobi), any n. Input is row-major n x n.

struct SymmetricEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major n x n, column i is the eigenvector of values[i]
  int sweeps = 0;
};

/// Cyclic Jacobi; throws NumericError when off-diagonal mass does not
/// vanish within max_sweeps.
SymmetricEigen jacobi_eigen(std::span<const double> a, std::size_t n, int max_sweeps = 64);

// ---------------------------------------------------------------------------
// Singular values. Two independent routes are kept: a one-sided Jacobi SVD
// acting on the columns of M, and eigenvalues of the Gram matrix M^T M.

/// Singular values (descending) by one-sided Jacobi rotations on M.
std::vector<double> singular_values(const Matrix& m);

struct Svd {
  Matrix u;                     // rows x k
  std::vector<double> sigma;    // descending, k = min(rows, cols)
  Matrix v;                     // cols x k
};

/// Thin SVD by one-sided Jacobi; columns of u for zero singular values are zero.
Svd svd(const Matrix& m);

/// Square roots of the (clamped) eigenvalues of M^T M, descending.
std::vector<double> singular_values_via_gram(const Matrix& m);

}  // namespace steer
