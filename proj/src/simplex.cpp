#include "steer/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "steer/errors.hpp"
#include "steer/kernels.hpp"

namespace steer {

namespace {

// Gauss-Jordan inverse with partial pivoting; row-major r x r.
std::vector<double> invert(std::vector<double> a, std::size_t r) {
  std::vector<double> inv(r * r, 0.0);
  for (std::size_t i = 0; i < r; ++i) inv[i * r + i] = 1.0;
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < r; ++i)
      if (std::abs(a[i * r + c]) > std::abs(a[piv * r + c])) piv = i;
    if (std::abs(a[piv * r + c]) < 1e-14) throw NumericError("simplex: singular basis during refactorization");
    if (piv != c)
      for (std::size_t k = 0; k < r; ++k) {
        std::swap(a[c * r + k], a[piv * r + k]);
        std::swap(inv[c * r + k], inv[piv * r + k]);
      }
    const double d = a[c * r + c];
    for (std::size_t k = 0; k < r; ++k) {
      a[c * r + k] /= d;
      inv[c * r + k] /= d;
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (i == c) continue;
      const double f = a[i * r + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < r; ++k) {
        a[i * r + k] -= f * a[c * r + k];
        inv[i * r + k] -= f * inv[c * r + k];
      }
    }
  }
  return inv;
}

class PhaseOne {
 public:
  PhaseOne(std::span<const double> columns, std::span<const double> rhs, const SimplexOptions& opt)
      : cols_(columns), r_(rhs.size()), n_(columns.size() / rhs.size()), opt_(opt) {
    sign_.resize(r_);
    b_.resize(r_);
    for (std::size_t i = 0; i < r_; ++i) {
      sign_[i] = rhs[i] < 0.0 ? -1.0 : 1.0;
      b_[i] = sign_[i] * rhs[i];
    }
    basis_.resize(r_);
    for (std::size_t i = 0; i < r_; ++i) basis_[i] = n_ + i;
    binv_.assign(r_ * r_, 0.0);
    for (std::size_t i = 0; i < r_; ++i) binv_[i * r_ + i] = 1.0;
    xb_ = b_;
  }

  SimplexResult run() {
    SimplexResult res;
    int degenerate_run = 0;
    for (int it = 0;; ++it) {
      if (it >= opt_.max_iterations) throw NumericError("simplex: iteration limit reached");
      if (it > 0 && it % opt_.refactor_every == 0) refactor();

      const std::vector<double> y = pricing_vector();
      const bool bland = degenerate_run > 50;
      std::size_t entering = kernels::npos;
      if (bland) {
        entering = opt_.parallel_pricing ? kernels::first_improving(cols_, r_, y, opt_.pricing_tol)
                                         : kernels::serial::first_improving(cols_, r_, y, opt_.pricing_tol);
      } else {
        const auto best = opt_.parallel_pricing ? kernels::price_columns(cols_, r_, y)
                                                : kernels::serial::price_columns(cols_, r_, y);
        if (best.score > opt_.pricing_tol) entering = best.index;
      }
      if (entering == kernels::npos || objective() <= 1e-15) {
        res.iterations = it;
        break;
      }

      const std::vector<double> u = ftran(entering);
      std::size_t leave = r_;
      double ratio = 0.0;
      for (std::size_t i = 0; i < r_; ++i) {
        if (u[i] <= opt_.pivot_tol) continue;
        const double q = std::max(0.0, xb_[i]) / u[i];
        if (leave == r_ || q < ratio - 1e-15) {
          leave = i;
          ratio = q;
        } else if (q <= ratio + 1e-15) {
          // Tie: Bland picks the lowest basic index; otherwise drive artificials out first, then the larger pivot.
          const bool better = bland ? basis_[i] < basis_[leave]
                                    : (is_artificial(i) && !is_artificial(leave)) ||
                                          (is_artificial(i) == is_artificial(leave) && u[i] > u[leave]);
          if (better) {
            leave = i;
            ratio = std::min(ratio, q);
          }
        }
      }
      if (leave == r_) throw NumericError("simplex: unbounded ray in a bounded phase-1 problem");
      degenerate_run = ratio <= 1e-15 ? degenerate_run + 1 : 0;
      pivot(leave, entering, u, ratio);
    }

    res.infeasibility = objective();
    res.feasible = res.infeasibility <= opt_.feasibility_tol;
    res.dual = pricing_vector();
    for (std::size_t i = 0; i < r_; ++i)
      if (!is_artificial(i) && xb_[i] > 0.0) {
        res.basis.push_back(basis_[i]);
        res.weights.push_back(xb_[i]);
      }
    return res;
  }

 private:
  bool is_artificial(std::size_t row) const { return basis_[row] >= n_; }

  double objective() const {
    double s = 0.0;
    for (std::size_t i = 0; i < r_; ++i)
      if (is_artificial(i)) s += std::max(0.0, xb_[i]);
    return s;
  }

  // y = S (c_B^T B^-1), i.e. the dual in the caller's (unflipped) row signs.
  std::vector<double> pricing_vector() const {
    std::vector<double> y(r_, 0.0);
    for (std::size_t i = 0; i < r_; ++i) {
      if (!is_artificial(i)) continue;
      for (std::size_t k = 0; k < r_; ++k) y[k] += binv_[i * r_ + k];
    }
    for (std::size_t k = 0; k < r_; ++k) y[k] *= sign_[k];
    return y;
  }

  // Column of the sign-flipped problem.
  std::vector<double> column(std::size_t j) const {
    std::vector<double> a(r_, 0.0);
    if (j >= n_) {
      a[j - n_] = 1.0;
    } else {
      for (std::size_t i = 0; i < r_; ++i) a[i] = sign_[i] * cols_[j * r_ + i];
    }
    return a;
  }

  std::vector<double> ftran(std::size_t j) const {
    const std::vector<double> a = column(j);
    std::vector<double> u(r_, 0.0);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t k = 0; k < r_; ++k) u[i] += binv_[i * r_ + k] * a[k];
    return u;
  }

  void pivot(std::size_t row, std::size_t entering, const std::vector<double>& u, double theta) {
    for (std::size_t i = 0; i < r_; ++i) xb_[i] -= theta * u[i];
    xb_[row] = theta;
    const double p = u[row];
    for (std::size_t k = 0; k < r_; ++k) binv_[row * r_ + k] /= p;
    for (std::size_t i = 0; i < r_; ++i) {
      if (i == row || u[i] == 0.0) continue;
      for (std::size_t k = 0; k < r_; ++k) binv_[i * r_ + k] -= u[i] * binv_[row * r_ + k];
    }
    basis_[row] = entering;
  }

  void refactor() {
    std::vector<double> bmat(r_ * r_, 0.0);
    for (std::size_t c = 0; c < r_; ++c) {
      const auto a = column(basis_[c]);
      for (std::size_t i = 0; i < r_; ++i) bmat[i * r_ + c] = a[i];
    }
    binv_ = invert(std::move(bmat), r_);
    for (std::size_t i = 0; i < r_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < r_; ++k) s += binv_[i * r_ + k] * b_[k];
      xb_[i] = std::abs(s) < 1e-15 ? 0.0 : s;
    }
  }

  std::span<const double> cols_;
  std::size_t r_;
  std::size_t n_;
  SimplexOptions opt_;
  std::vector<double> sign_;
  std::vector<double> b_;
  std::vector<std::size_t> basis_;
  std::vector<double> binv_;
  std::vector<double> xb_;
};

}  // namespace

SimplexResult solve_phase_one(std::span<const double> columns, std::span<const double> rhs,
                              const SimplexOptions& options) {
  if (rhs.empty() || columns.empty() || columns.size() % rhs.size() != 0)
    throw InvalidArgument("solve_phase_one: column block does not match the number of rows");
  return PhaseOne(columns, rhs, options).run();
}

}  // namespace steer
