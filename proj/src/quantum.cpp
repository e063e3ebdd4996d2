#include "steer/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "steer/errors.hpp"

namespace steer {

namespace {

using Op2 = std::array<Complex, 4>;  // row-major 2x2

DensityMatrix::Entries kron(const Op2& a, const Op2& b) {
  DensityMatrix::Entries out{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out[(2 * i + k) * 4 + (2 * j + l)] = a[i * 2 + j] * b[k * 2 + l];
  return out;
}

Op2 bloch_operator(const Vec3& r) {
  // (I + r.sigma)/2
  return {Complex(0.5 * (1.0 + r[2]), 0.0), Complex(0.5 * r[0], -0.5 * r[1]), Complex(0.5 * r[0], 0.5 * r[1]),
          Complex(0.5 * (1.0 - r[2]), 0.0)};
}

}  // namespace

std::string StateDiagnostics::summary() const {
  std::ostringstream os;
  os << "hermitian_residual=" << hermitian_residual << " trace_deviation=" << trace_deviation
     << " min_eigenvalue=" << min_eigenvalue;
  return os.str();
}

DensityMatrix DensityMatrix::from_entries(const Entries& entries) {
  DensityMatrix rho(entries);
  const auto diag = validate_state(rho);
  if (!diag.pass()) throw InvalidArgument("invalid density matrix: " + diag.summary());
  return rho;
}

DensityMatrix DensityMatrix::unchecked(const Entries& entries) { return DensityMatrix(entries); }

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  double n2 = 0.0;
  for (const auto& c : psi) n2 += std::norm(c);
  if (std::abs(n2 - 1.0) > 1e-12) throw InvalidArgument("from_pure: state vector is not normalized");
  Entries e{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) e[i * 4 + j] = psi[i] * std::conj(psi[j]);
  return DensityMatrix(e);
}

Complex DensityMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < 4; ++i) t += (*this)(i, i);
  return t;
}

DensityMatrix DensityMatrix::mix(const DensityMatrix& other, double p) const {
  Entries e{};
  for (std::size_t k = 0; k < 16; ++k) e[k] = p * entries_[k] + (1.0 - p) * other.entries_[k];
  return DensityMatrix(e);
}

StateVector singlet_vector() {
  const double h = 1.0 / std::sqrt(2.0);
  return {Complex(0.0), Complex(h), Complex(-h), Complex(0.0)};
}

DensityMatrix singlet_state() { return DensityMatrix::from_pure(singlet_vector()); }

DensityMatrix maximally_mixed_state() {
  DensityMatrix::Entries e{};
  for (std::size_t i = 0; i < 4; ++i) e[i * 4 + i] = 0.25;
  return DensityMatrix::unchecked(e);
}

DensityMatrix werner_state(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("werner_state: W must lie in [0, 1]");
  return singlet_state().mix(maximally_mixed_state(), w);
}

DensityMatrix product_state(const Vec3& alice_bloch, const Vec3& bob_bloch) {
  if (norm(alice_bloch) > 1.0 + 1e-12 || norm(bob_bloch) > 1.0 + 1e-12)
    throw InvalidArgument("product_state: Bloch vectors must have norm <= 1");
  return DensityMatrix::from_entries(kron(bloch_operator(alice_bloch), bloch_operator(bob_bloch)));
}

const std::array<Complex, 4>& pauli(std::size_t k) {
  static const std::array<Op2, 4> ops = {{
      {Complex(0), Complex(1), Complex(1), Complex(0)},
      {Complex(0), Complex(0, -1), Complex(0, 1), Complex(0)},
      {Complex(1), Complex(0), Complex(0), Complex(-1)},
      {Complex(1), Complex(0), Complex(0), Complex(1)},
  }};
  if (k > 3) throw InvalidArgument("pauli: index out of range");
  return ops[k];
}

Complex expectation(const DensityMatrix& rho, const std::array<Complex, 4>& a, const std::array<Complex, 4>& b) {
  const auto op = kron(a, b);
  Complex t = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t += rho(i, j) * op[j * 4 + i];
  return t;
}

namespace {

double hermitian_residual(const DensityMatrix::Entries& e) {
  double r = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r = std::max(r, std::abs(e[i * 4 + j] - std::conj(e[j * 4 + i])));
  return r;
}

void require_hermitian(const DensityMatrix& rho) {
  if (hermitian_residual(rho.entries()) > kHermitianTol) throw InvalidArgument("state is not Hermitian");
}

double real_part_checked(Complex z) {
  if (std::abs(z.imag()) > 1e-12) throw NumericError("expectation value has an imaginary residue above 1e-12");
  return z.real();
}

}  // namespace

SpinCorrelationMatrix spin_correlation_matrix(const DensityMatrix& rho) {
  require_hermitian(rho);
  Matrix t(3, 3);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) t(p, q) = real_part_checked(expectation(rho, pauli(p), pauli(q)));
  return t;
}

BlochMarginals marginals(const DensityMatrix& rho) {
  require_hermitian(rho);
  BlochMarginals m;
  for (std::size_t p = 0; p < 3; ++p) {
    m.alice[p] = real_part_checked(expectation(rho, pauli(p), pauli(3)));
    m.bob[p] = real_part_checked(expectation(rho, pauli(3), pauli(p)));
  }
  return m;
}

double fidelity_with_pure(const DensityMatrix& rho, const StateVector& psi) {
  double n2 = 0.0;
  for (const auto& c : psi) n2 += std::norm(c);
  if (std::abs(n2 - 1.0) > 1e-12) throw InvalidArgument("fidelity_with_pure: psi is not normalized");
  Complex f = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) f += std::conj(psi[i]) * rho(i, j) * psi[j];
  return f.real();
}

double closest_werner_parameter(double singlet_fidelity) { return (4.0 * singlet_fidelity - 1.0) / 3.0; }

std::array<double, 4> hermitian_eigenvalues(const DensityMatrix::Entries& h) {
  // Real symmetric embedding [[Re, -Im], [Im, Re]] has each eigenvalue twice.
  constexpr std::size_t n = 8;
  std::vector<double> big(n * n);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      // Symmetrize so that a slightly non-Hermitian input still has a real spectrum.
      const Complex z = 0.5 * (h[i * 4 + j] + std::conj(h[j * 4 + i]));
      big[i * n + j] = z.real();
      big[(i + 4) * n + (j + 4)] = z.real();
      big[i * n + (j + 4)] = -z.imag();
      big[(i + 4) * n + j] = z.imag();
    }
  const auto eig = jacobi_eigen(big, n);
  return {eig.values[0], eig.values[2], eig.values[4], eig.values[6]};
}

StateDiagnostics validate_state(const DensityMatrix& rho) {
  StateDiagnostics d;
  d.hermitian_residual = hermitian_residual(rho.entries());
  d.trace_deviation = std::abs(rho.trace() - 1.0);
  d.min_eigenvalue = hermitian_eigenvalues(rho.entries())[0];
  d.hermitian = d.hermitian_residual <= kHermitianTol;
  d.unit_trace = d.trace_deviation <= kTraceTol;
  d.positive = d.min_eigenvalue >= kPsdTol;
  return d;
}

}  // namespace steer
