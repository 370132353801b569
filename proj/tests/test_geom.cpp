#include <doctest.h>

#include <cmath>
#include <random>

#include "relpose/errors.hpp"
#include "relpose/geom.hpp"

using namespace relpose;

namespace {

Rot3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const Vec3 axis(g(rng), g(rng), g(rng));
  std::uniform_real_distribution<double> a(0.0, kPi);
  return Rot3::from_axis_angle(axis, a(rng));
}

bool is_rotation(const Mat3& m, double tol) {
  return (m * m.transpose() - Mat3::Identity()).norm() < tol && std::abs(m.determinant() - 1.0) < tol;
}

}  // namespace

TEST_CASE("angle_between") {
  CHECK(angle_between({1, 0, 0}, {1, 0, 0}) == doctest::Approx(0.0));
  CHECK(angle_between({1, 0, 0}, {0, 1, 0}) == doctest::Approx(kPi / 2));
  CHECK(angle_between({1, 0, 0}, Vec3(1, 1, 0) / std::sqrt(2.0)) == doctest::Approx(kPi / 4));
  CHECK(angle_between({1, 0, 0}, {-3, 0, 0}) == doctest::Approx(kPi));
  CHECK_THROWS_AS(angle_between({0, 0, 0}, {1, 0, 0}), DegenerateGeometry);
}

TEST_CASE("angle_between is symmetric and obeys the triangle inequality") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int i = 0; i < 500; ++i) {
    const Vec3 a(g(rng), g(rng), g(rng)), b(g(rng), g(rng), g(rng)), c(g(rng), g(rng), g(rng));
    CHECK(angle_between(a, b) == angle_between(b, a));
    CHECK(angle_between(a, c) <= angle_between(a, b) + angle_between(b, c) + 1e-12);
  }
}

TEST_CASE("rotation_about_z") {
  CHECK(rotation_about_z(0.0).matrix().isApprox(Mat3::Identity()));
  const Vec3 q = rotation_about_z(kPi / 2) * Vec3(1, 0, 0);
  CHECK((q - Vec3(0, 1, 0)).norm() < 1e-15);
  const Vec3 h = rotation_about_z(kPi) * Vec3(1, 1, 0);
  CHECK((h - Vec3(-1, -1, 0)).norm() < 1e-15);
  for (double t = -10.0; t < 10.0; t += 0.37) {
    CHECK(is_rotation(rotation_about_z(t).matrix(), 1e-14));
  }
}

TEST_CASE("Rot3 construction") {
  CHECK_THROWS_AS(Rot3::from_matrix(2.0 * Mat3::Identity()), DegenerateGeometry);
  CHECK_THROWS_AS(Rot3::from_matrix(-Mat3::Identity()), DegenerateGeometry);
  CHECK_NOTHROW(Rot3::from_matrix(rotation_about_x(0.3).matrix()));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.05);
  for (int i = 0; i < 100; ++i) {
    Mat3 noisy = random_rotation(rng).matrix();
    for (int k = 0; k < 9; ++k) noisy(k / 3, k % 3) += g(rng);
    CHECK(is_rotation(Rot3::nearest(noisy).matrix(), 1e-12));
  }
  // A reflection is projected to a proper rotation.
  Mat3 reflect = Mat3::Identity();
  reflect(2, 2) = -1.0;
  CHECK(is_rotation(Rot3::nearest(reflect).matrix(), 1e-12));
}

TEST_CASE("Rot3 angle") {
  CHECK(Rot3().angle() == 0.0);
  CHECK(rotation_about_y(0.7).angle() == doctest::Approx(0.7));
  CHECK(rotation_about_x(kPi).angle() == doctest::Approx(kPi));
  CHECK(rotation_about_z(-0.4).angle() == doctest::Approx(0.4));
}

TEST_CASE("rotation_aligning_xy") {
  CHECK(rotation_aligning_xy({1, 0, 0.3}, {1, 0, -0.5}).matrix().isApprox(Mat3::Identity()));
  CHECK(rotation_aligning_xy({1, 0, 0}, {0, 1, 0}).matrix().isApprox(rotation_about_z(kPi / 2).matrix()));
  CHECK(rotation_aligning_xy({1, 1, 0}, {-1, 1, 0}).matrix().isApprox(rotation_about_z(kPi / 2).matrix()));
  CHECK_THROWS_AS(rotation_aligning_xy({0, 0, 1}, {1, 0, 0}), DegenerateGeometry);
  CHECK_THROWS_WITH(rotation_aligning_xy({1, 0, 0}, {1e-9, 0, 2}),
                    "vertical motion, yaw unobservable");

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    const Vec3 a(g(rng), g(rng), g(rng)), b(g(rng), g(rng), g(rng)), v(g(rng), g(rng), g(rng));
    const Rot3 r = rotation_aligning_xy(a, b);
    CHECK((r * v).z() == doctest::Approx(v.z()).epsilon(1e-12));
    const Vec3 ra = r * a;
    CHECK(std::abs(std::atan2(ra.y(), ra.x()) - std::atan2(b.y(), b.x())) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("signed_xy_angle") {
  CHECK(signed_xy_angle({1, 0, 0}, {0, 1, 5}) == doctest::Approx(kPi / 2));
  CHECK(signed_xy_angle({1, 0, 0}, {0, -1, 0}) == doctest::Approx(-kPi / 2));
  CHECK(signed_xy_angle({1, 0, 0}, {-1, 0, 0}) == doctest::Approx(kPi));
}

TEST_CASE("euler_xyz") {
  const EulerXYZ zero = euler_xyz(Rot3());
  CHECK(zero.rx == 0.0);
  CHECK(zero.ry == 0.0);
  CHECK(zero.rz == 0.0);
  const EulerXYZ z = euler_xyz(rotation_about_z(0.3));
  CHECK(z.rx == doctest::Approx(0.0));
  CHECK(z.ry == doctest::Approx(0.0));
  CHECK(z.rz == doctest::Approx(0.3));
  const Rot3 r = rotation_about_z(0.2) * rotation_about_y(0.1) * rotation_about_x(-0.4);
  const EulerXYZ e = euler_xyz(r);
  CHECK(e.rx == doctest::Approx(-0.4));
  CHECK(e.ry == doctest::Approx(0.1));
  CHECK(e.rz == doctest::Approx(0.2));

  try {
    euler_xyz(rotation_about_y(kPi / 2));
    FAIL("expected gimbal lock");
  } catch (const GimbalLock& g) {
    CHECK(g.axis() == 'y');
  }
}

TEST_CASE("euler round trip on random rotations") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Rot3 r = random_rotation(rng);
    EulerXYZ e;
    try {
      e = euler_xyz(r);
    } catch (const GimbalLock&) {
      continue;
    }
    ++checked;
    CHECK(geodesic_distance(from_euler_xyz(e), r) < 1e-8);
  }
  CHECK(checked > 990);
}

TEST_CASE("geodesic distance and step_toward") {
  const Rot3 a = rotation_about_z(0.1);
  const Rot3 b = rotation_about_z(1.1);
  CHECK(geodesic_distance(a, b) == doctest::Approx(1.0));
  const Rot3 s = step_toward(a, b, 0.25);
  CHECK(geodesic_distance(a, s) == doctest::Approx(0.25));
  CHECK(geodesic_distance(s, b) == doctest::Approx(0.75));
  CHECK(geodesic_distance(step_toward(a, b, 5.0), b) < 1e-12);
  CHECK(geodesic_distance(step_toward(a, a, 0.1), a) < 1e-12);
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2 * kPi));
}

TEST_CASE("Pose compose and frame checks") {
  Pose g{Frame::kWorld, Frame::kVehicleCamera, rotation_about_z(0.5), {1, 2, 3}};
  Pose d{Frame::kVehicleCamera, Frame::kDroneCamera, rotation_about_x(0.2), {0, 0, 4}};
  const Pose wd = compose(g, d);
  CHECK(wd.parent == Frame::kWorld);
  CHECK(wd.child == Frame::kDroneCamera);
  const Vec3 p(0.3, -1, 2);
  CHECK((wd.apply(p) - g.apply(d.apply(p))).norm() < 1e-12);
  CHECK((g.inverse().apply(g.apply(p)) - p).norm() < 1e-12);
  CHECK_THROWS_AS(compose(d, g), std::invalid_argument);
  CHECK(frame_name(Frame::kWorld) == "world");
}
