#include "relpose/geom.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relpose/errors.hpp"

namespace relpose {

Rot3 Rot3::from_matrix(const Mat3& m, double tol) {
  if (!m.allFinite()) throw DegenerateGeometry("rotation has non-finite entries");
  const double ortho = (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (ortho > tol || std::abs(det - 1.0) > tol) {
    throw DegenerateGeometry("matrix is not a proper rotation");
  }
  return Rot3(m, Unchecked{});
}

Rot3 Rot3::nearest(const Mat3& m) {
  if (!m.allFinite()) throw DegenerateGeometry("rotation has non-finite entries");
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return Rot3(u * d * v.transpose(), Unchecked{});
}

Rot3 Rot3::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw DegenerateGeometry("degenerate direction");
  return Rot3(Eigen::AngleAxisd(angle, axis / n).toRotationMatrix(), Unchecked{});
}

double Rot3::angle() const {
  const Eigen::Quaterniond q(m_);
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

std::string_view frame_name(Frame f) {
  switch (f) {
    case Frame::kWorld: return "world";
    case Frame::kVehicleCamera: return "vehicle-camera";
    case Frame::kDroneCamera: return "drone-camera";
  }
  return "unknown";
}

Pose Pose::inverse() const {
  Pose out;
  out.parent = child;
  out.child = parent;
  out.rotation = rotation.inverse();
  out.translation = -(out.rotation * translation);
  return out;
}

Pose compose(const Pose& a, const Pose& b) {
  if (a.child != b.parent) {
    throw std::invalid_argument("pose composition frame mismatch: " +
                                std::string(frame_name(a.child)) + " vs " +
                                std::string(frame_name(b.parent)));
  }
  Pose out;
  out.parent = a.parent;
  out.child = b.child;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw DegenerateGeometry("degenerate direction");
  const Vec3 ua = a / na;
  const Vec3 ub = b / nb;
  // atan2 form keeps full precision near 0 and π; equal to acos(clamp(dot)).
  return std::atan2(ua.cross(ub).norm(), std::clamp(ua.dot(ub), -1.0, 1.0));
}

Rot3 rotation_about_x(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return Rot3::from_matrix(m, 1e-12);
}

Rot3 rotation_about_y(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return Rot3::from_matrix(m, 1e-12);
}

Rot3 rotation_about_z(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return Rot3::from_matrix(m, 1e-12);
}

double signed_xy_angle(const Vec3& a, const Vec3& b) {
  const double na = std::hypot(a.x(), a.y());
  const double nb = std::hypot(b.x(), b.y());
  if (na <= kProjectionEpsilon || nb <= kProjectionEpsilon) {
    throw DegenerateGeometry("vertical motion, yaw unobservable");
  }
  const double cross = a.x() * b.y() - a.y() * b.x();
  const double dot = a.x() * b.x() + a.y() * b.y();
  return std::atan2(cross, dot);
}

Rot3 rotation_aligning_xy(const Vec3& a, const Vec3& b) {
  return rotation_about_z(signed_xy_angle(a, b));
}

EulerXYZ euler_xyz(const Rot3& r) {
  const Mat3& m = r.matrix();
  const double ry = std::asin(std::clamp(-m(2, 0), -1.0, 1.0));
  if (kPi / 2.0 - std::abs(ry) <= kGimbalGuard) {
    throw GimbalLock("euler_xyz: gimbal lock about y", 'y');
  }
  return {std::atan2(m(2, 1), m(2, 2)), ry, std::atan2(m(1, 0), m(0, 0))};
}

Rot3 from_euler_xyz(const EulerXYZ& e) {
  return rotation_about_z(e.rz) * rotation_about_y(e.ry) * rotation_about_x(e.rx);
}

double geodesic_distance(const Rot3& a, const Rot3& b) {
  return (a.inverse() * b).angle();
}

Rot3 step_toward(const Rot3& from, const Rot3& to, double max_angle) {
  const Rot3 delta = from.inverse() * to;
  const double angle = delta.angle();
  if (angle <= max_angle) return to;
  const Eigen::AngleAxisd aa(delta.matrix());
  return (from * Rot3::from_axis_angle(aa.axis(), max_angle)).orthonormalized();
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace relpose
