#include "steer/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "steer/errors.hpp"

namespace steer {

CorrelationMatrix::CorrelationMatrix(const Matrix& m) : m_(m) {
  if (m.rows() < 1 || m.rows() > 3 || m.cols() < 1 || m.cols() > 3)
    throw InvalidArgument("CorrelationMatrix: dimensions must be between 1 and 3");
  for (std::size_t j = 0; j < m.rows(); ++j)
    for (std::size_t k = 0; k < m.cols(); ++k)
      if (!(std::abs(m(j, k)) <= 1.0 + kEntryTol)) throw InvalidArgument("CorrelationMatrix: entry outside [-1, 1]");
}

std::string_view to_string(Inequality which) { return which == Inequality::kRis ? "ris" : "nss"; }

Inequality inequality_from_string(std::string_view name) {
  if (name == "ris" || name == "RIS") return Inequality::kRis;
  if (name == "nss" || name == "NSS") return Inequality::kNss;
  throw InvalidArgument("unknown inequality '" + std::string(name) + "'");
}

SteeringAssessment make_assessment(Inequality which, double parameter, double bound, std::optional<double> uncertainty) {
  SteeringAssessment a;
  a.inequality = which;
  a.parameter = parameter;
  a.bound = bound;
  a.margin = parameter - bound;
  a.uncertainty = uncertainty;
  a.violated = a.margin > uncertainty.value_or(kBoundaryTol);
  return a;
}

CorrelationMatrix predicted_correlation(const SpinCorrelationMatrix& t, const MeasurementFrame& alice,
                                        const MeasurementFrame& bob) {
  return CorrelationMatrix(alice.as_columns().transpose() * t * bob.as_columns());
}

double trace_norm(const Matrix& m) {
  const auto s = singular_values(m);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

double trace_norm_via_gram(const Matrix& m) {
  const auto s = singular_values_via_gram(m);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

SteeringAssessment assess_ris(const CorrelationMatrix& m) {
  return make_assessment(Inequality::kRis, trace_norm(m), std::sqrt(static_cast<double>(m.alice_settings())));
}

namespace {

void require_orthonormal(const MeasurementFrame& f, const char* who) {
  if (!f.orthonormal())
    throw InvalidArgument(std::string(who) +
                          ": frame is not orthonormal; use trace_norm(predicted_correlation(...)) instead");
}

}  // namespace

double ris_predicted(const SpinCorrelationMatrix& t, const Matrix& alice_projector, const Matrix& bob_projector) {
  return trace_norm(alice_projector * t * bob_projector);
}

double ris_predicted(const SpinCorrelationMatrix& t, const MeasurementFrame& alice, const MeasurementFrame& bob) {
  require_orthonormal(alice, "ris_predicted");
  require_orthonormal(bob, "ris_predicted");
  return ris_predicted(t, projection_matrix(alice), projection_matrix(bob));
}

double nss_parameter(const CorrelationMatrix& m) {
  if (m.alice_settings() != 2) throw InvalidArgument("nss_parameter: defined only for two Alice settings");
  const double h = 1.0 / std::sqrt(2.0);
  double plus = 0.0, minus = 0.0;
  for (std::size_t k = 0; k < m.bob_settings(); ++k) {
    const double p = h * (m(0, k) + m(1, k));
    const double q = h * (m(0, k) - m(1, k));
    plus += p * p;
    minus += q * q;
  }
  return std::sqrt(plus) + std::sqrt(minus);
}

SteeringAssessment assess_nss(const CorrelationMatrix& m) {
  return make_assessment(Inequality::kNss, nss_parameter(m), std::sqrt(2.0));
}

namespace {

double nss_from_plus_minus(const Matrix& t, const Matrix& bob_projector, const Vec3& a_plus, const Vec3& a_minus) {
  const Matrix pbtt = bob_projector * t.transpose();
  return norm(pbtt * a_plus) + norm(pbtt * a_minus);
}

}  // namespace

double nss_predicted(const SpinCorrelationMatrix& t, const MeasurementFrame& alice, const MeasurementFrame& bob) {
  if (alice.size() != 2) throw InvalidArgument("nss_predicted: Alice needs exactly two directions");
  require_orthonormal(alice, "nss_predicted");
  require_orthonormal(bob, "nss_predicted");
  const double h = 1.0 / std::sqrt(2.0);
  const Vec3 a_plus = h * (alice[0].vec() + alice[1].vec());
  const Vec3 a_minus = h * (alice[0].vec() - alice[1].vec());
  return nss_from_plus_minus(t, projection_matrix(bob), a_plus, a_minus);
}

double werner_ris_closed_form(double w, double phi) {
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("werner_ris_closed_form: W must lie in [0, 1]");
  return w * (1.0 + std::abs(std::cos(phi)));
}

double werner_nss_closed_form(double w, double phi, double alpha) {
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("werner_nss_closed_form: W must lie in [0, 1]");
  const double c2 = std::cos(phi) * std::cos(phi);
  const double s2 = std::sin(phi) * std::sin(phi);
  const double x = std::sin(2.0 * alpha) * s2;
  // 1 + c2 - x >= 0 analytically; clamp rounding.
  return w * (std::sqrt(std::max(0.0, 1.0 + c2 + x)) + std::sqrt(std::max(0.0, 1.0 + c2 - x))) / std::sqrt(2.0);
}

namespace {

struct PlaneBasis {
  Vec3 e1;
  Vec3 e2;
};

Matrix flatten_symmetric_eigvec(const SymmetricEigen& eig, std::size_t col) {
  Matrix v(3, 1);
  for (std::size_t r = 0; r < 3; ++r) v(r, 0) = eig.vectors[r * 3 + col];
  return v;
}

SymmetricEigen eigen3(const Matrix& m) {
  std::array<double, 9> flat{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) flat[i * 3 + j] = 0.5 * (m(i, j) + m(j, i));
  return jacobi_eigen(flat, 3);
}

PlaneBasis plane_basis(const Matrix& projector) {
  if (projector.rows() != 3 || projector.cols() != 3) throw InvalidArgument("min_nss_over_rotations: need 3x3 projector");
  const auto eig = eigen3(projector);
  // Rank-2 projector: eigenvalues {0, 1, 1}.
  if (std::abs(eig.values[0]) > 1e-8 || std::abs(eig.values[1] - 1.0) > 1e-8 || std::abs(eig.values[2] - 1.0) > 1e-8)
    throw InvalidArgument("min_nss_over_rotations: alice_plane is not a rank-2 projector");
  const Matrix v1 = flatten_symmetric_eigvec(eig, 1);
  const Matrix v2 = flatten_symmetric_eigvec(eig, 2);
  return {v1.col(0), v2.col(0)};
}

double golden_section_min(auto&& f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  return std::min({fc, fd, f(0.5 * (lo + hi))});
}

}  // namespace

double min_nss_over_rotations(const SpinCorrelationMatrix& t, const Matrix& alice_plane, const MeasurementFrame& bob,
                              MinimizationMode mode) {
  require_orthonormal(bob, "min_nss_over_rotations");
  const PlaneBasis basis = plane_basis(alice_plane);
  const Matrix pb = projection_matrix(bob);

  if (mode == MinimizationMode::kAnalytic) {
    const Matrix k = alice_plane * t * pb * t.transpose() * alice_plane;
    const auto eig = eigen3(k);
    // K is PSD with support on the plane: the two largest eigenvalues.
    return std::sqrt(std::max(0.0, eig.values[2])) + std::sqrt(std::max(0.0, eig.values[1]));
  }

  auto f = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const Vec3 a_plus = c * basis.e1 + s * basis.e2;
    const Vec3 a_minus = s * basis.e1 - c * basis.e2;
    return nss_from_plus_minus(t, pb, a_plus, a_minus);
  };
  // f has period pi/2; scan one period at 0.5 degree, then refine the best cell.
  const double step = 0.5 * std::numbers::pi / 180.0;
  const int cells = 180;
  double best_theta = 0.0, best = f(0.0);
  for (int i = 1; i < cells; ++i) {
    const double th = i * step;
    const double v = f(th);
    if (v < best) {
      best = v;
      best_theta = th;
    }
  }
  return std::min(best, golden_section_min(f, best_theta - step, best_theta + step, 1e-8));
}

OptimalPlanes optimal_pair_planes(const SpinCorrelationMatrix& t) {
  if (t.rows() != 3 || t.cols() != 3) throw InvalidArgument("optimal_pair_planes: T must be 3x3");
  const Svd d = svd(t);
  OptimalPlanes out{Matrix(3, 3), Matrix(3, 3), d.sigma[0] + d.sigma[1]};
  std::vector<Vec3> left;
  for (std::size_t c = 0; c < 2; ++c) {
    Vec3 u = d.u.col(c);
    // Zero singular value: u is undefined, complete the basis from the axes in order.
    if (norm(u) < 0.5) {
      double best = -1.0;
      for (std::size_t axis = 0; axis < 3; ++axis) {
        Vec3 e{};
        e[axis] = 1.0;
        for (const auto& prev : left) e = e - dot(e, prev) * prev;
        if (norm(e) > best + 1e-12) {
          best = norm(e);
          u = normalized(e);
        }
      }
    }
    left.push_back(u);
    out.alice_projector = out.alice_projector + outer(u, u);
    const Vec3 v = d.v.col(c);
    out.bob_projector = out.bob_projector + outer(v, v);
  }
  return out;
}

}  // namespace steer
