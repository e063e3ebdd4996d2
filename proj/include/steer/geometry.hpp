#pragma once

// Measurement directions on the Bloch sphere and the frames built from them.
// All angles are radians.

#include <cstdint>
#include <vector>

#include "steer/linalg.hpp"

namespace steer {

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kOrthoTol = 1e-10;

/// Unit 3-vector.
class Direction {
 public:
  /// Throws InvalidArgument unless |v| = 1 within 1e-12.
  explicit Direction(const Vec3& v);
  /// Normalizes v; throws on the zero vector.
  static Direction normalize(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

 private:
  Vec3 v_;
};

/// Ordered set of 1..3 measurement directions.
class MeasurementFrame {
 public:
  explicit MeasurementFrame(std::vector<Direction> directions);

  std::size_t size() const { return dirs_.size(); }
  const Direction& operator[](std::size_t i) const { return dirs_[i]; }
  const std::vector<Direction>& directions() const { return dirs_; }
  bool orthonormal() const { return orthonormal_; }

  /// 3 x m matrix with the directions as columns.
  Matrix as_columns() const;
  /// m x m matrix of pairwise dot products.
  Matrix gram() const;

 private:
  std::vector<Direction> dirs_;
  bool orthonormal_ = false;
};

/// Proper rotation (R^T R = I, det R = +1).
class Rotation {
 public:
  explicit Rotation(const Matrix& m);
  static Rotation identity();
  /// Right-handed rotation by `angle` about `axis`.
  static Rotation about_axis(const Direction& axis, double angle);

  const Matrix& matrix() const { return m_; }
  Vec3 apply(const Vec3& v) const { return m_ * v; }
  Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }

 private:
  Matrix m_;
};

/// P = sum_j a_j a_j^T. Requires an orthonormal frame.
Matrix projection_matrix(const MeasurementFrame& frame);

/// Deterministic in-plane reference for the plane orthogonal to `normal`:
/// the normalized projection of z onto the plane, or x when normal is +-z.
Direction in_plane_reference(const Direction& normal);

/// Orthonormal pair in the plane orthogonal to `normal`, rotated by `alpha`
/// about `normal` from (r, normal x r), r = in_plane_reference(normal).
MeasurementFrame pair_in_plane(const Direction& normal, double alpha);

/// Alice's orthonormal pair in a plane tilted by `phi` from Bob's plane about
/// their line of intersection (the in-plane reference of Bob's plane);
/// `alpha` is measured from that line to the first direction.
MeasurementFrame tilted_pair(double phi, double alpha, const Direction& bob_plane_normal);

/// Normal (d1 x d2, normalized) of a two-direction frame.
Direction plane_normal(const MeasurementFrame& pair);

MeasurementFrame standard_triad();
MeasurementFrame misaligned_triad();
MeasurementFrame tetrahedron_frame();

/// Haar-uniform rotation from a uniformly random unit quaternion.
Rotation random_rotation(std::uint64_t seed);
MeasurementFrame rotate_frame(const MeasurementFrame& frame, const Rotation& r);

}  // namespace steer
