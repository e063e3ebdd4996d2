#pragma once

// Two-qubit states in the basis {|HH>, |HV>, |VH>, |VV>} (Alice (x) Bob),
// with sigma_3 diagonal in {H, V}.

#include <array>
#include <complex>
#include <string>

#include "steer/linalg.hpp"

namespace steer {

using Complex = std::complex<double>;
using StateVector = std::array<Complex, 4>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = -1e-10;

struct StateDiagnostics {
  double hermitian_residual = 0.0;  // max |rho - rho^dagger| entry
  double trace_deviation = 0.0;     // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;
  bool pass() const { return hermitian && unit_trace && positive; }
  std::string summary() const;
};

class DensityMatrix {
 public:
  using Entries = std::array<Complex, 16>;

  /// Validates all invariants; throws InvalidArgument with the diagnostics on failure.
  static DensityMatrix from_entries(const Entries& entries);
  /// No validation. Used to probe validate_state() and rejection paths.
  static DensityMatrix unchecked(const Entries& entries);

  static DensityMatrix from_pure(const StateVector& psi);

  Complex operator()(std::size_t i, std::size_t j) const { return entries_[i * 4 + j]; }
  const Entries& entries() const { return entries_; }

  Complex trace() const;
  /// p * this + (1 - p) * other
  DensityMatrix mix(const DensityMatrix& other, double p) const;

 private:
  explicit DensityMatrix(const Entries& e) : entries_(e) {}
  Entries entries_{};
};

using SpinCorrelationMatrix = Matrix;  // 3x3, T_pq = Tr[rho sigma_p (x) sigma_q]

struct BlochMarginals {
  Vec3 alice{};
  Vec3 bob{};
};

/// (|HV> - |VH>)/sqrt(2)
StateVector singlet_vector();
DensityMatrix singlet_state();
DensityMatrix maximally_mixed_state();
/// W |psi-><psi-| + (1 - W) I/4, W in [0, 1].
DensityMatrix werner_state(double w);

/// Product of single-qubit pure states with Bloch vectors a (Alice) and b (Bob).
DensityMatrix product_state(const Vec3& alice_bloch, const Vec3& bob_bloch);

SpinCorrelationMatrix spin_correlation_matrix(const DensityMatrix& rho);
BlochMarginals marginals(const DensityMatrix& rho);

/// <psi| rho |psi>; psi must be normalized.
double fidelity_with_pure(const DensityMatrix& rho, const StateVector& psi);

/// Werner parameter with the same singlet fidelity: W = (4F - 1)/3.
/// Only exact for Werner states.
double closest_werner_parameter(double singlet_fidelity);

StateDiagnostics validate_state(const DensityMatrix& rho);

/// Eigenvalues (ascending) of a 4x4 Hermitian matrix.
std::array<double, 4> hermitian_eigenvalues(const DensityMatrix::Entries& h);

/// Pauli matrices sigma_1..sigma_3 (index 0..2) and the identity (index 3).
const std::array<Complex, 4>& pauli(std::size_t k);

/// Tr[rho (A (x) B)] for 2x2 operators A, B.
Complex expectation(const DensityMatrix& rho, const std::array<Complex, 4>& a, const std::array<Complex, 4>& b);

}  // namespace steer
