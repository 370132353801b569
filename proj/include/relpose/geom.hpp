#ifndef RELPOSE_GEOM_HPP
#define RELPOSE_GEOM_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <string_view>

namespace relpose {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

// Tolerance on R·Rᵀ = I and det(R) = 1 accepted by Rot3::from_matrix.
inline constexpr double kRotationTolerance = 1e-9;
// XY-projection norm below which a horizontal heading is undefined.
inline constexpr double kProjectionEpsilon = 1e-6;
// Minimum distance of |ry| from π/2 accepted by euler_xyz.
inline constexpr double kGimbalGuard = 1e-6;

/// Proper rotation matrix. Construction either validates (`from_matrix`) or
/// projects onto SO(3) (`nearest`), so a Rot3 always satisfies the group
/// invariants up to floating point round-off.
class Rot3 {
 public:
  Rot3() : m_(Mat3::Identity()) {}

  static Rot3 identity() { return Rot3(); }
  /// Throws DegenerateGeometry if `m` is not orthonormal with det +1.
  static Rot3 from_matrix(const Mat3& m, double tol = kRotationTolerance);
  /// Closest rotation in the Frobenius sense (SVD with determinant fix).
  static Rot3 nearest(const Mat3& m);
  static Rot3 from_axis_angle(const Vec3& axis, double angle);

  const Mat3& matrix() const { return m_; }
  Rot3 inverse() const { return Rot3(m_.transpose(), Unchecked{}); }
  Rot3 operator*(const Rot3& o) const { return Rot3(m_ * o.m_, Unchecked{}); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  /// Re-projects onto SO(3); used after long chains of products.
  Rot3 orthonormalized() const { return nearest(m_); }

  /// Rotation angle in [0, π].
  double angle() const;

 private:
  struct Unchecked {};
  Rot3(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;
};

enum class Frame { kWorld, kVehicleCamera, kDroneCamera };

std::string_view frame_name(Frame f);

/// Rigid transform taking coordinates in `child` to coordinates in `parent`:
/// p_parent = rotation * p_child + translation.
struct Pose {
  Frame parent = Frame::kWorld;
  Frame child = Frame::kWorld;
  Rot3 rotation;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Pose inverse() const;
};

/// a ∘ b. Requires a.child == b.parent; throws std::invalid_argument otherwise.
Pose compose(const Pose& a, const Pose& b);

double angle_between(const Vec3& a, const Vec3& b);

Rot3 rotation_about_x(double theta);
Rot3 rotation_about_y(double theta);
Rot3 rotation_about_z(double theta);

/// Yaw rotation taking the horizontal heading of `a` onto that of `b`.
Rot3 rotation_aligning_xy(const Vec3& a, const Vec3& b);

/// Signed angle from the XY projection of `a` to that of `b`, in (−π, π].
double signed_xy_angle(const Vec3& a, const Vec3& b);

// Extrinsic X-then-Y-then-Z: R = Rz(rz)·Ry(ry)·Rx(rx).
struct EulerXYZ {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;
};

EulerXYZ euler_xyz(const Rot3& r);
Rot3 from_euler_xyz(const EulerXYZ& e);

/// Geodesic distance on SO(3), in [0, π].
double geodesic_distance(const Rot3& a, const Rot3& b);

/// Moves `from` toward `to` along the connecting geodesic by at most
/// `max_angle` radians.
Rot3 step_toward(const Rot3& from, const Rot3& to, double max_angle);

/// Wraps an angle to (−π, π].
double wrap_angle(double a);

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

}  // namespace relpose

#endif  // RELPOSE_GEOM_HPP
