#pragma once

// Helpers shared by the test binaries: random physical states and frames.

#include <cmath>
#include <cstdint>
#include <random>

#include "steer/geometry.hpp"
#include "steer/linalg.hpp"
#include "steer/quantum.hpp"
#include "steer/steering.hpp"

namespace steer::testing {

/// rho = G G^dagger / Tr(G G^dagger) with Gaussian G (full-rank, generic).
inline DensityMatrix random_density_matrix(std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<Complex, 16> g{};
  for (auto& z : g) z = Complex(normal(gen), normal(gen));
  DensityMatrix::Entries rho{};
  double tr = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += g[i * 4 + k] * std::conj(g[j * 4 + k]);
      rho[i * 4 + j] = s;
    }
  for (std::size_t i = 0; i < 4; ++i) tr += rho[i * 4 + i].real();
  for (auto& z : rho) z /= tr;
  // Exact Hermitian symmetry.
  for (std::size_t i = 0; i < 4; ++i) {
    rho[i * 4 + i] = Complex(rho[i * 4 + i].real(), 0.0);
    for (std::size_t j = i + 1; j < 4; ++j) rho[j * 4 + i] = std::conj(rho[i * 4 + j]);
  }
  return DensityMatrix::from_entries(rho);
}

inline SpinCorrelationMatrix random_physical_t(std::mt19937_64& gen) {
  return spin_correlation_matrix(random_density_matrix(gen));
}

inline Direction random_direction(std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return Direction::normalize({normal(gen), normal(gen), normal(gen)});
}

/// Random orthonormal pair (a random plane with a random in-plane angle).
inline MeasurementFrame random_pair(std::mt19937_64& gen) {
  return rotate_frame(pair_in_plane(Direction({0, 1, 0}), 0.0), random_rotation(gen()));
}

inline MeasurementFrame random_triad(std::mt19937_64& gen) {
  return rotate_frame(standard_triad(), random_rotation(gen()));
}

inline Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols, double scale = 1.0) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uni(gen);
  return m;
}

// Random 2x2 matrix with NSS parameter equal to `target`.
inline Matrix matrix_with_nss(std::mt19937_64& gen, double target) {
  for (;;) {
    const Matrix m = random_matrix(gen, 2, 2);
    const double s = nss_parameter(CorrelationMatrix(m));
    const Matrix scaled = (target / s) * m;
    bool ok = true;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) ok = ok && std::abs(scaled(i, j)) <= 1.0;
    if (ok) return scaled;
  }
}

}  // namespace steer::testing
