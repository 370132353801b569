#ifndef RELPOSE_SCAN_SIM_HPP
#define RELPOSE_SCAN_SIM_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "relpose/geom.hpp"
#include "relpose/vanishing_matrix.hpp"

namespace relpose {

// ---------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------

enum class PrimitiveKind { kSphere, kBox, kGroundPlane, kSparseBlob };

/// Static scene content in world coordinates.
///
///   sphere       dimensions.x = radius
///   box          dimensions   = full edge lengths (axis aligned)
///   ground-plane center.z     = plane height (dimensions ignored)
///   sparse-blob  dimensions.x = scatter radius, dimensions.y = element
///                radius; `count` small spheres placed from `layout_seed`
struct ScenePrimitive {
  PrimitiveKind kind = PrimitiveKind::kSphere;
  Vec3 center = Vec3::Zero();
  Vec3 dimensions = Vec3::Ones();
  int count = 0;
  std::uint64_t layout_seed = 0;
};

/// Throws std::invalid_argument on invalid dimensions/count.
void validate(const ScenePrimitive& p);

struct DroneModel {
  double width = 0.5;
};

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct Waypoint {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  EulerXYZ attitude;  // radians
};

/// Piecewise-linear trajectory in world frame. Positions and Euler angles are
/// interpolated linearly; queries outside the time range clamp to the ends.
class Trajectory {
 public:
  Trajectory() = default;
  /// Requires ≥ 2 waypoints with strictly increasing times.
  explicit Trajectory(std::vector<Waypoint> waypoints);

  /// Pose of `body` in the world at time t.
  Pose pose_at(double t, Frame body) const;
  Vec3 position_at(double t) const;
  Rot3 rotation_at(double t) const;

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }

 private:
  Waypoint sample(double t) const;
  std::vector<Waypoint> waypoints_;
};

struct Trajectories {
  Trajectory drone;
  Trajectory vehicle;

  Pose drone_pose(double t) const { return drone.pose_at(t, Frame::kDroneCamera); }
  Pose vehicle_pose(double t) const { return vehicle.pose_at(t, Frame::kVehicleCamera); }
  /// Ground-truth drone position in the vehicle-camera frame.
  Vec3 relative_position(double t) const;
  /// Ground-truth R_{G→D}: maps drone-frame directions into the vehicle frame.
  Rot3 relative_rotation(double t) const;
};

// ---------------------------------------------------------------------------
// LiDAR + motor
// ---------------------------------------------------------------------------

/// Multi-beam spinning LiDAR laid on its side: the spin axis is horizontal, so
/// each beam sweeps a cone around it and the fan of beams sweeps a vertical
/// scan plane.
struct LidarModel {
  std::vector<double> beam_offsets;    // radians from the scan plane
  double azimuth_resolution = 0.0;     // radians between firings
  double spin_rate_hz = 10.0;          // revolutions per second
  double range_sigma = 0.0;            // m
  double max_range = 100.0;            // m

  static LidarModel vlp16();
  double firing_interval() const;
  double points_per_second() const;
  void validate() const;
};

enum class MotorMode { kSweep, kVibrate };

/// Motor rotating the LiDAR mount about the vehicle Z axis. The motor angle
/// is the azimuth of the scan plane.
struct MotorState {
  MotorMode mode = MotorMode::kSweep;
  double angle = 0.0;                  // sweep start angle, rad
  double angular_velocity = 0.0;       // rad/s (sweep or vibration stroke speed)
  double sweep_extent = kPi;      // rad
  double vibrate_center = 0.0;         // rad
  double vibrate_amplitude = 0.0;      // rad
  double vibrate_period = 0.12;        // s per frame

  static MotorState sweep(double start_angle, double rpm = 11.4);
  static MotorState vibrate(double center, double amplitude = deg2rad(5.0),
                            double rpm = 57.2, double period = 0.12);

  /// Motor angle at time `dt` after frame start.
  double angle_at(double dt) const;
  double frame_duration() const;
  void validate() const;
};

/// Emission direction in the vehicle frame for a motor angle, spin angle and
/// beam offset.
Vec3 beam_direction(double motor_angle, double spin_angle, double beam_offset);

struct ScanPoint {
  Vec3 position = Vec3::Zero();  // vehicle-camera frame at the frame reference time
  double time = 0.0;             // emission time
  bool on_drone = false;         // ground-truth label, simulator side only
};

struct ScanFrame {
  std::vector<ScanPoint> points;
  double t_start = 0.0;
  double t_end = 0.0;
  double t_ref = 0.0;  // vehicle pose the points are aligned to

  std::vector<Vec3> positions() const;
};

// ---------------------------------------------------------------------------
// Simulator
// ---------------------------------------------------------------------------

/// Scene with every primitive expanded into ray-castable geometry.
class Scene {
 public:
  Scene() = default;
  explicit Scene(const std::vector<ScenePrimitive>& primitives);

  /// Nearest hit distance along a unit-direction ray in (0, max_range].
  std::optional<double> intersect(const Vec3& origin, const Vec3& dir,
                                  double max_range) const;
  bool empty() const { return spheres_.empty() && boxes_.empty() && planes_.empty(); }

 private:
  struct Sphere {
    Vec3 center;
    double radius;
  };
  struct Box {
    Vec3 center;
    Vec3 half;
  };
  std::vector<Sphere> spheres_;
  std::vector<Box> boxes_;
  std::vector<double> planes_;
};

double ray_sphere(const Vec3& origin, const Vec3& dir, const Vec3& center,
                  double radius);
double ray_box(const Vec3& origin, const Vec3& dir, const Vec3& center,
               const Vec3& half_extent);
/// Ray against a box with arbitrary orientation (`rotation` maps box-local
/// coordinates to the ray's frame).
double ray_oriented_box(const Vec3& origin, const Vec3& dir, const Pose& box,
                        const Vec3& half_extent);

struct ScanContext {
  const Scene* scene = nullptr;
  const Trajectories* trajectories = nullptr;
  DroneModel drone;
  bool drone_present = true;
  LidarModel lidar = LidarModel::vlp16();
};

/// Casts rays over a motor sweep of at least 180°. Points are aligned to the
/// vehicle frame at the middle of the sweep.
ScanFrame simulate_full_scan(const ScanContext& ctx, const MotorState& motor,
                             double t0, std::uint64_t seed);

/// One vibration period of returns around `motor.vibrate_center`.
ScanFrame simulate_vibration_frame(const ScanContext& ctx, const MotorState& motor,
                                   double t0, std::uint64_t seed);

/// Ray casting over [t0, t0 + motor.frame_duration()) for either mode.
ScanFrame simulate_frame(const ScanContext& ctx, const MotorState& motor,
                         double t0, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Indirect observations
// ---------------------------------------------------------------------------

struct IndirectObsModel {
  Mat3 world_axes = Mat3::Identity();  // columns
  double vd_sigma = 0.0;               // rad
  double ego_sigma = 0.0;              // rad
  bool scramble = true;                // random column order and signs

  void validate() const;
};

/// Independent RNG stream for (base seed, purpose, index).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream, std::uint64_t index);

/// Tilts `v` by |N(0, sigma)| about a random axis orthogonal to it.
Vec3 perturb_direction(const Vec3& v, double sigma, std::mt19937_64& rng);

/// Vanishing directions seen by a camera with world pose `camera`.
VanishingMatrix observe_vds(const Pose& camera, const IndirectObsModel& model,
                            std::uint64_t seed);

/// Drone self-motion direction between two poses, in the drone frame of the
/// first pose. Scale-free, like a five-point solver's translation.
Vec3 observe_ego_direction(const Pose& drone_i, const Pose& drone_j, double sigma,
                           std::uint64_t seed);

}  // namespace relpose

#endif  // RELPOSE_SCAN_SIM_HPP
