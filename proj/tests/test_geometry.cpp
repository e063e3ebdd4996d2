#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "steer/errors.hpp"
#include "steer/geometry.hpp"
#include "test_support.hpp"

using namespace steer;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(const Vec3& a, const Vec3& b, double tol) { return norm(a - b) <= tol; }

std::vector<MeasurementFrame> constructed_frames() {
  std::vector<MeasurementFrame> out{standard_triad(), misaligned_triad(), tetrahedron_frame()};
  const Direction y({0, 1, 0});
  for (double a : {0.0, 0.3, 1.2, 2.5}) {
    out.push_back(pair_in_plane(y, a));
    out.push_back(tilted_pair(64.0 * kPi / 180.0, a, y));
    out.push_back(tilted_pair(kPi / 2, a, Direction::normalize({1, 2, 3})));
  }
  return out;
}

}  // namespace

TEST_CASE("Direction and MeasurementFrame validation") {
  CHECK_THROWS_AS(Direction({1, 0, 1e-5}), InvalidArgument);
  CHECK_THROWS_AS(Direction::normalize({0, 0, 0}), InvalidArgument);
  CHECK(close(Direction::normalize({0, 3, 4}).vec(), {0, 0.6, 0.8}, 1e-15));
  CHECK_THROWS_AS(MeasurementFrame({}), InvalidArgument);
  CHECK_THROWS_AS(MeasurementFrame({Direction({1, 0, 0}), Direction({0, 1, 0}), Direction({0, 0, 1}),
                                    Direction({1, 0, 0})}),
                  InvalidArgument);
  CHECK_THROWS_AS(Rotation(Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}), InvalidArgument);
  CHECK_THROWS_AS(Rotation(Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1.01}}), InvalidArgument);
}

TEST_CASE("standard triad") {
  const auto t = standard_triad();
  CHECK(t.orthonormal());
  CHECK(projection_matrix(t).max_abs_diff(Matrix::identity(3)) == 0.0);
  CHECK(t.gram().max_abs_diff(Matrix::identity(3)) == 0.0);
}

TEST_CASE("projection matrix") {
  const MeasurementFrame xz({Direction({1, 0, 0}), Direction({0, 0, 1})});
  CHECK(projection_matrix(xz).max_abs_diff(Matrix{{1, 0, 0}, {0, 0, 0}, {0, 0, 1}}) <= 1e-15);
  CHECK(projection_matrix(misaligned_triad()).max_abs_diff(Matrix::identity(3)) <= 1e-12);
  CHECK_THROWS_AS(projection_matrix(tetrahedron_frame()), InvalidArgument);
}

TEST_CASE("misaligned triad vectors") {
  const auto f = misaligned_triad();
  CHECK(f.orthonormal());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(norm(f[i].vec()) - 1.0) <= 1e-12);
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(std::abs(dot(f[i].vec(), f[j].vec())) <= 1e-12);
  }
  CHECK(f[0][0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(f[0][0] == doctest::Approx(0.5774).epsilon(1e-4));
}

TEST_CASE("tetrahedron frame") {
  const auto f = tetrahedron_frame();
  CHECK_FALSE(f.orthonormal());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(norm(f[i].vec()) - 1.0) <= 1e-12);
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(std::abs(dot(f[i].vec(), f[j].vec()) - 0.5) <= 1e-12);
  }
  const Matrix g = f.gram();
  std::vector<double> flat;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) flat.push_back(g(i, j));
  const auto eig = jacobi_eigen(flat, 3);
  CHECK(eig.values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eig.values[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pair_in_plane convention anchors") {
  const Direction y({0, 1, 0});
  const auto p0 = pair_in_plane(y, 0.0);
  CHECK(close(p0[0].vec(), {0, 0, 1}, 1e-15));
  CHECK(close(p0[1].vec(), {1, 0, 0}, 1e-15));
  const auto p90 = pair_in_plane(y, kPi / 2);
  CHECK(close(p90[0].vec(), {1, 0, 0}, 1e-15));
  CHECK(close(p90[1].vec(), {0, 0, -1}, 1e-15));

  // Normal along z falls back to x as the reference.
  const auto pz = pair_in_plane(Direction({0, 0, -1}), 0.0);
  CHECK(close(pz[0].vec(), {1, 0, 0}, 1e-15));

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double a = uni(gen);
    const auto p = pair_in_plane(y, a);
    CHECK(p.orthonormal());
    CHECK(std::abs(p[0][1]) <= 1e-15);
    CHECK(std::abs(p[1][1]) <= 1e-15);
    // Continuity in alpha.
    const auto q = pair_in_plane(y, a + 1e-7);
    CHECK(close(p[0].vec(), q[0].vec(), 2e-7));
  }
}

TEST_CASE("tilted pair geometry") {
  const Direction y({0, 1, 0});
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> uni(0.0, kPi);

  for (int i = 0; i < 50; ++i) {
    const double a = uni(gen);
    const auto flat = tilted_pair(0.0, a, y);
    CHECK(projection_matrix(flat).max_abs_diff(projection_matrix(pair_in_plane(y, a))) <= 1e-10);
    CHECK(std::abs(flat[0][1]) <= 1e-12);
    CHECK(std::abs(flat[1][1]) <= 1e-12);

    // Bob in the x-z plane, Phi = 90 degrees: Alice in the z-y plane.
    const auto perp = tilted_pair(kPi / 2, a, y);
    CHECK(perp.orthonormal());
    CHECK(std::abs(perp[0][0]) <= 1e-12);
    CHECK(std::abs(perp[1][0]) <= 1e-12);

    // alpha is measured from the intersection line (z here).
    CHECK(std::abs(perp[0][2] - std::cos(a)) <= 1e-12);
  }

  for (int i = 0; i < 50; ++i) {
    const Direction bob_normal = testing::random_direction(gen);
    const double phi = uni(gen) / 2.0;
    const auto f = tilted_pair(phi, uni(gen), bob_normal);
    const Direction n = plane_normal(f);
    const double angle = std::acos(std::min(1.0, std::abs(dot(n.vec(), bob_normal.vec()))));
    CHECK(std::abs(angle - phi) <= 1e-7);  // acos loses digits near 0
  }

  const double phi64 = 64.0 * kPi / 180.0;
  const auto f64 = tilted_pair(phi64, 0.4, y);
  const Vec3 n = plane_normal(f64).vec();
  // Angle from the cross product and dot product keeps full precision.
  const double angle = std::atan2(norm(cross(n, y.vec())), std::abs(dot(n, y.vec())));
  CHECK(std::abs(angle - phi64) <= 1e-10);
}

TEST_CASE("random rotations") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Matrix r = random_rotation(seed).matrix();
    CHECK((r.transpose() * r).max_abs_diff(Matrix::identity(3)) <= 1e-10);
    CHECK(std::abs(determinant3(r) - 1.0) <= 1e-10);
  }
  CHECK(random_rotation(42).matrix() == random_rotation(42).matrix());
  CHECK_FALSE(random_rotation(42).matrix() == random_rotation(43).matrix());
}

TEST_CASE("about_axis") {
  const auto r = Rotation::about_axis(Direction({0, 0, 1}), kPi / 2);
  CHECK(close(r.apply({1, 0, 0}), {0, 1, 0}, 1e-15));
  const auto back = r * Rotation::about_axis(Direction({0, 0, 1}), -kPi / 2);
  CHECK(back.matrix().max_abs_diff(Matrix::identity(3)) <= 1e-15);
}

TEST_CASE("rotations preserve Gram matrices of every constructed frame") {
  std::uint64_t seed = 100;
  for (const auto& f : constructed_frames()) {
    for (int k = 0; k < 20; ++k) {
      const auto g = rotate_frame(f, random_rotation(seed++));
      CHECK(g.gram().max_abs_diff(f.gram()) <= 1e-12);
      CHECK(g.orthonormal() == f.orthonormal());
    }
  }
}

TEST_CASE("projectors of orthonormal constructed frames are idempotent and symmetric") {
  for (const auto& f : constructed_frames()) {
    if (!f.orthonormal()) continue;
    const Matrix p = projection_matrix(f);
    CHECK((p * p).max_abs_diff(p) <= 1e-10);
    CHECK(p.transpose().max_abs_diff(p) <= 1e-10);
    const double tr = p(0, 0) + p(1, 1) + p(2, 2);
    CHECK(tr == doctest::Approx(static_cast<double>(f.size())).epsilon(1e-12));
  }
}
