#include "steer/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "steer/errors.hpp"

namespace steer {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows > kMaxDim || cols > kMaxDim) throw InvalidArgument("Matrix: dimensions above 3 are not supported");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  if (rows_ > kMaxDim || cols_ > kMaxDim) throw InvalidArgument("Matrix: dimensions above 3 are not supported");
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("Matrix: ragged initializer");
    std::size_t j = 0;
    for (double x : r) (*this)(i, j++) = x;
    ++i;
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec3 Matrix::row(std::size_t i) const {
  Vec3 r{};
  for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

Vec3 Matrix::col(std::size_t j) const {
  Vec3 c{};
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

double Matrix::max_abs_diff(const Matrix& other) const {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  double d = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) d = std::max(d, std::abs((*this)(i, j) - other(i, j)));
  return d;
}

double Matrix::frobenius_norm() const { return std::sqrt(frobenius_dot(*this, *this)); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw InvalidArgument("Matrix product: inner dimensions differ");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols_; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidArgument("Matrix sum: shapes differ");
  Matrix c(a.rows_, a.cols_);
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] = a.data_[k] + b.data_[k];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-1.0) * b; }

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& x : c.data_) x *= s;
  return c;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Vec3 operator*(const Matrix& a, const Vec3& v) {
  Vec3 r{};
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Matrix outer(std::span<const double> u, std::span<const double> v) {
  Matrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

double frobenius_dot(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("frobenius_dot: shapes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

double determinant3(const Matrix& a) {
  if (a.rows() != 3 || a.cols() != 3) throw InvalidArgument("determinant3: need 3x3");
  return dot(a.row(0), cross(a.row(1), a.row(2)));
}

// ---------------------------------------------------------------------------

SymmetricEigen jacobi_eigen(std::span<const double> input, std::size_t n, int max_sweeps) {
  if (input.size() != n * n) throw InvalidArgument("jacobi_eigen: size mismatch");
  std::vector<double> a(input.begin(), input.end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return s;
  };
  double scale = 0.0;
  for (double x : a) scale += x * x;
  const double threshold = 1e-32 * std::max(scale, 1e-300);

  int sweep = 0;
  for (; sweep < max_sweeps && off_diagonal() > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Rotation angle zeroing a_pq (Rutishauser's stable form).
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_diagonal() > threshold) throw NumericError("jacobi_eigen: no convergence");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a[i * n + i] < a[j * n + j]; });
  SymmetricEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a[order[c] * n + order[c]];
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + c] = v[r * n + order[c]];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// One-sided Jacobi: orthogonalize the columns of W = M V. On exit the column
// norms of W are the singular values.
struct OneSided {
  std::array<Vec3, 3> w{};   // columns of M V (length rows)
  std::array<Vec3, 3> v{};   // columns of V (length cols)
};

OneSided one_sided_jacobi(const Matrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  OneSided s;
  for (std::size_t j = 0; j < cols; ++j) {
    s.w[j] = m.col(j);
    s.v[j][j] = 1.0;
  }
  constexpr int kMaxSweeps = 60;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += s.w[p][i] * s.w[p][i];
          beta += s.w[q][i] * s.w[q][i];
          gamma += s.w[p][i] * s.w[q][i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double wp = s.w[p][i];
          const double wq = s.w[q][i];
          s.w[p][i] = c * wp - sn * wq;
          s.w[q][i] = sn * wp + c * wq;
        }
        for (std::size_t i = 0; i < cols; ++i) {
          const double vp = s.v[p][i];
          const double vq = s.v[q][i];
          s.v[p][i] = c * vp - sn * vq;
          s.v[q][i] = sn * vp + c * vq;
        }
      }
    }
    if (!rotated) return s;
  }
  throw NumericError("one-sided Jacobi SVD: no convergence");
}

}  // namespace

Svd svd(const Matrix& m) {
  // Work on the orientation with fewer columns so that k = min(rows, cols)
  // columns carry all the singular values.
  const bool flip = m.cols() > m.rows();
  const Matrix work = flip ? m.transpose() : m;
  const OneSided s = one_sided_jacobi(work);
  const std::size_t k = work.cols();

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::array<double, 3> norms{};
  for (std::size_t j = 0; j < k; ++j) norms[j] = norm(s.w[j]);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return norms[a] > norms[b]; });

  Matrix u(work.rows(), k), v(work.cols(), k);
  std::vector<double> sigma(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t j = order[c];
    sigma[c] = norms[j];
    for (std::size_t i = 0; i < work.rows(); ++i) u(i, c) = norms[j] > 0.0 ? s.w[j][i] / norms[j] : 0.0;
    for (std::size_t i = 0; i < work.cols(); ++i) v(i, c) = s.v[j][i];
  }
  if (flip) return Svd{v, std::move(sigma), u};
  return Svd{u, std::move(sigma), v};
}

std::vector<double> singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  return svd(m).sigma;
}

std::vector<double> singular_values_via_gram(const Matrix& m) {
  const Matrix g = m.transpose() * m;
  const std::size_t n = g.rows();
  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = g(i, j);
  const auto eig = jacobi_eigen(flat, n);
  std::vector<double> out;
  for (auto it = eig.values.rbegin(); it != eig.values.rend(); ++it) {
    double lambda = *it;
    if (lambda < 0.0) {
      if (lambda < -1e-14) throw NumericError("Gram matrix has a negative eigenvalue");
      lambda = 0.0;
    }
    out.push_back(std::sqrt(lambda));
  }
  // M^T M is cols x cols; keep the min(rows, cols) leading values.
  out.resize(std::min(m.rows(), m.cols()));
  return out;
}

}  // namespace steer
