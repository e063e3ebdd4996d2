#pragma once

// Rotationally-invariant (trace-norm) and two-setting NSS steering
// parameters, their Werner-state closed forms, and the minimisation of the
// NSS parameter over in-plane rotations of Alice's pair.

#include <optional>
#include <string_view>

#include "steer/geometry.hpp"
#include "steer/linalg.hpp"
#include "steer/quantum.hpp"

namespace steer {

/// m x n matrix of <A_j B_k>; m = Alice settings, n = Bob settings.
class CorrelationMatrix {
 public:
  static constexpr double kEntryTol = 1e-9;

  /// Throws InvalidArgument when an entry leaves [-1 - 1e-9, 1 + 1e-9] or a
  /// dimension is outside 1..3.
  explicit CorrelationMatrix(const Matrix& m);

  const Matrix& matrix() const { return m_; }
  std::size_t alice_settings() const { return m_.rows(); }
  std::size_t bob_settings() const { return m_.cols(); }
  double operator()(std::size_t j, std::size_t k) const { return m_(j, k); }

 private:
  Matrix m_;
};

enum class Inequality { kRis, kNss };
std::string_view to_string(Inequality which);
Inequality inequality_from_string(std::string_view name);

struct SteeringAssessment {
  Inequality inequality = Inequality::kRis;
  double parameter = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // parameter - bound
  bool violated = false;
  std::optional<double> uncertainty;
};

/// Rounding slack at the bound: a parameter that equals the bound up to
/// floating-point error (e.g. 3 / sqrt(3) vs sqrt(3)) is not a violation.
inline constexpr double kBoundaryTol = 1e-12;

/// Builds an assessment. With an uncertainty, violation requires
/// margin > uncertainty; without, margin > kBoundaryTol.
SteeringAssessment make_assessment(Inequality which, double parameter, double bound,
                                   std::optional<double> uncertainty = std::nullopt);

/// M_jk = a_j^T T b_k, any frames.
CorrelationMatrix predicted_correlation(const SpinCorrelationMatrix& t, const MeasurementFrame& alice,
                                        const MeasurementFrame& bob);

/// Sum of singular values.
double trace_norm(const Matrix& m);
inline double trace_norm(const CorrelationMatrix& m) { return trace_norm(m.matrix()); }
/// Same quantity from the eigenvalues of M^T M; kept as an independent route.
double trace_norm_via_gram(const Matrix& m);

SteeringAssessment assess_ris(const CorrelationMatrix& m);

/// ||P_A T P_B||_tr; both frames must be orthonormal.
double ris_predicted(const SpinCorrelationMatrix& t, const MeasurementFrame& alice, const MeasurementFrame& bob);
double ris_predicted(const SpinCorrelationMatrix& t, const Matrix& alice_projector, const Matrix& bob_projector);

/// |M^T u+| + |M^T u-|, u+- = (1, +-1)/sqrt(2); requires m = 2.
double nss_parameter(const CorrelationMatrix& m);
SteeringAssessment assess_nss(const CorrelationMatrix& m);

/// |P_B T^T a+| + |P_B T^T a-|, a+- = (a1 +- a2)/sqrt(2).
double nss_predicted(const SpinCorrelationMatrix& t, const MeasurementFrame& alice, const MeasurementFrame& bob);

/// W (1 + |cos phi|)
double werner_ris_closed_form(double w, double phi);
/// W (sqrt(1 + cos^2 phi + sin 2a sin^2 phi) + sqrt(1 + cos^2 phi - sin 2a sin^2 phi)) / sqrt(2)
double werner_nss_closed_form(double w, double phi, double alpha);

enum class MinimizationMode { kNumeric, kAnalytic };

/// Minimum over rotations of Alice's pair within her plane of the NSS
/// parameter. `alice_plane` must be a rank-2 projector, `bob` orthonormal.
double min_nss_over_rotations(const SpinCorrelationMatrix& t, const Matrix& alice_plane, const MeasurementFrame& bob,
                              MinimizationMode mode);

struct OptimalPlanes {
  Matrix alice_projector;
  Matrix bob_projector;
  double value = 0.0;  // sigma_1 + sigma_2 of T
};

/// Plane pair maximising ||P_A T P_B||_tr: spans of the top two left/right
/// singular vectors of T.
OptimalPlanes optimal_pair_planes(const SpinCorrelationMatrix& t);

}  // namespace steer
