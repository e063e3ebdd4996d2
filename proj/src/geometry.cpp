#include "steer/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "steer/errors.hpp"

namespace steer {

Direction::Direction(const Vec3& v) : v_(v) {
  if (std::abs(norm(v) - 1.0) > kUnitTol) throw InvalidArgument("Direction: vector is not unit norm");
}

Direction Direction::normalize(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("Direction: cannot normalize a zero vector");
  return Direction((1.0 / n) * v);
}

MeasurementFrame::MeasurementFrame(std::vector<Direction> directions) : dirs_(std::move(directions)) {
  if (dirs_.empty() || dirs_.size() > 3) throw InvalidArgument("MeasurementFrame: need between 1 and 3 directions");
  orthonormal_ = true;
  for (std::size_t i = 0; i < dirs_.size(); ++i)
    for (std::size_t j = i + 1; j < dirs_.size(); ++j)
      if (std::abs(dot(dirs_[i].vec(), dirs_[j].vec())) > kOrthoTol) orthonormal_ = false;
}

Matrix MeasurementFrame::as_columns() const {
  Matrix a(3, dirs_.size());
  for (std::size_t j = 0; j < dirs_.size(); ++j)
    for (std::size_t i = 0; i < 3; ++i) a(i, j) = dirs_[j][i];
  return a;
}

Matrix MeasurementFrame::gram() const {
  const Matrix a = as_columns();
  return a.transpose() * a;
}

Rotation::Rotation(const Matrix& m) : m_(m) {
  if (m.rows() != 3 || m.cols() != 3) throw InvalidArgument("Rotation: need a 3x3 matrix");
  if ((m.transpose() * m).max_abs_diff(Matrix::identity(3)) > 1e-10) throw InvalidArgument("Rotation: not orthogonal");
  if (std::abs(determinant3(m) - 1.0) > 1e-10) throw InvalidArgument("Rotation: determinant is not +1");
}

Rotation Rotation::identity() { return Rotation(Matrix::identity(3)); }

Rotation Rotation::about_axis(const Direction& axis, double angle) {
  // Rodrigues: R = cI + s[k]_x + (1 - c) k k^T
  const Vec3& k = axis.vec();
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Matrix r(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = (i == j ? c : 0.0) + (1.0 - c) * k[i] * k[j];
  r(0, 1) -= s * k[2];
  r(0, 2) += s * k[1];
  r(1, 0) += s * k[2];
  r(1, 2) -= s * k[0];
  r(2, 0) -= s * k[1];
  r(2, 1) += s * k[0];
  return Rotation(r);
}

Matrix projection_matrix(const MeasurementFrame& frame) {
  if (!frame.orthonormal())
    throw InvalidArgument(
        "projection_matrix: frame is not orthonormal; orthonormalize it or use the general M = A^T T B path");
  Matrix p(3, 3);
  for (const auto& d : frame.directions()) p = p + outer(d.vec(), d.vec());
  return p;
}

Direction in_plane_reference(const Direction& normal) {
  const Vec3 z{0.0, 0.0, 1.0};
  const Vec3 proj = z - dot(z, normal.vec()) * normal.vec();
  if (norm(proj) < 1e-9) return Direction(Vec3{1.0, 0.0, 0.0});
  return Direction::normalize(proj);
}

namespace {

MeasurementFrame pair_from_axes(const Vec3& first, const Vec3& second, double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return MeasurementFrame({Direction::normalize(c * first + s * second), Direction::normalize(c * second - s * first)});
}

}  // namespace

MeasurementFrame pair_in_plane(const Direction& normal, double alpha) {
  const Direction r = in_plane_reference(normal);
  return pair_from_axes(r.vec(), cross(normal.vec(), r.vec()), alpha);
}

MeasurementFrame tilted_pair(double phi, double alpha, const Direction& bob_plane_normal) {
  const Direction line = in_plane_reference(bob_plane_normal);
  const Vec3 alice_normal = Rotation::about_axis(line, phi).apply(bob_plane_normal.vec());
  return pair_from_axes(line.vec(), cross(alice_normal, line.vec()), alpha);
}

Direction plane_normal(const MeasurementFrame& pair) {
  if (pair.size() != 2) throw InvalidArgument("plane_normal: need exactly two directions");
  return Direction::normalize(cross(pair[0].vec(), pair[1].vec()));
}

MeasurementFrame standard_triad() {
  return MeasurementFrame({Direction({1, 0, 0}), Direction({0, 1, 0}), Direction({0, 0, 1})});
}

MeasurementFrame misaligned_triad() {
  const double s3 = std::sqrt(3.0);
  const double s12 = std::sqrt(12.0);
  return MeasurementFrame({
      Direction({1.0 / s3, 1.0 / s3, 1.0 / s3}),
      Direction({(1.0 + s3) / s12, -2.0 / s12, (1.0 - s3) / s12}),
      Direction({(1.0 - s3) / s12, -2.0 / s12, (1.0 + s3) / s12}),
  });
}

MeasurementFrame tetrahedron_frame() {
  const double s3 = std::sqrt(3.0);
  return MeasurementFrame({
      Direction({1.0, 0.0, 0.0}),
      Direction({0.5, 1.0 / (2.0 * s3), std::sqrt(2.0 / 3.0)}),
      Direction({0.5, s3 / 2.0, 0.0}),
  });
}

Rotation random_rotation(std::uint64_t seed) {
  // Shoemake's uniform unit quaternion.
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double u1 = uni(gen), u2 = uni(gen), u3 = uni(gen);
  const double two_pi = 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const double x = a * std::sin(two_pi * u2), y = a * std::cos(two_pi * u2);
  const double z = b * std::sin(two_pi * u3), w = b * std::cos(two_pi * u3);
  const Matrix r{
      {1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
      {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
      {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)},
  };
  return Rotation(r);
}

MeasurementFrame rotate_frame(const MeasurementFrame& frame, const Rotation& r) {
  std::vector<Direction> out;
  out.reserve(frame.size());
  for (const auto& d : frame.directions()) out.push_back(Direction::normalize(r.apply(d.vec())));
  return MeasurementFrame(std::move(out));
}

}  // namespace steer
