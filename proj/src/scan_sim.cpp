#include "relpose/scan_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "relpose/errors.hpp"

namespace relpose {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Scene primitives
// ---------------------------------------------------------------------------

void validate(const ScenePrimitive& p) {
  switch (p.kind) {
    case PrimitiveKind::kSphere:
      if (!(p.dimensions.x() > 0.0)) throw std::invalid_argument("sphere radius must be > 0");
      break;
    case PrimitiveKind::kBox:
      if (!(p.dimensions.minCoeff() > 0.0)) throw std::invalid_argument("box dimensions must be > 0");
      break;
    case PrimitiveKind::kGroundPlane:
      break;
    case PrimitiveKind::kSparseBlob:
      if (!(p.dimensions.x() > 0.0) || !(p.dimensions.y() > 0.0)) {
        throw std::invalid_argument("sparse-blob radii must be > 0");
      }
      if (p.count < 1) throw std::invalid_argument("sparse-blob count must be >= 1");
      break;
  }
  if (!p.center.allFinite()) throw std::invalid_argument("primitive center must be finite");
}

double ray_sphere(const Vec3& origin, const Vec3& dir, const Vec3& center, double radius) {
  const Vec3 oc = origin - center;
  const double b = oc.dot(dir);
  const double c = oc.squaredNorm() - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return kInf;
  const double s = std::sqrt(disc);
  const double t0 = -b - s;
  if (t0 > 0.0) return t0;
  const double t1 = -b + s;
  return t1 > 0.0 ? t1 : kInf;
}

double ray_box(const Vec3& origin, const Vec3& dir, const Vec3& center, const Vec3& half) {
  double t_near = -kInf;
  double t_far = kInf;
  for (int i = 0; i < 3; ++i) {
    const double lo = center[i] - half[i] - origin[i];
    const double hi = center[i] + half[i] - origin[i];
    if (dir[i] == 0.0) {
      if (lo > 0.0 || hi < 0.0) return kInf;
      continue;
    }
    double t1 = lo / dir[i];
    double t2 = hi / dir[i];
    if (t1 > t2) std::swap(t1, t2);
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
    if (t_near > t_far) return kInf;
  }
  if (t_near > 0.0) return t_near;
  return t_far > 0.0 ? t_far : kInf;
}

double ray_oriented_box(const Vec3& origin, const Vec3& dir, const Pose& box,
                        const Vec3& half) {
  const Rot3 inv = box.rotation.inverse();
  const Vec3 local_origin = inv * (origin - box.translation);
  const Vec3 local_dir = inv * dir;
  return ray_box(local_origin, local_dir, Vec3::Zero(), half);
}

Scene::Scene(const std::vector<ScenePrimitive>& primitives) {
  for (const auto& p : primitives) {
    validate(p);
    switch (p.kind) {
      case PrimitiveKind::kSphere:
        spheres_.push_back({p.center, p.dimensions.x()});
        break;
      case PrimitiveKind::kBox:
        boxes_.push_back({p.center, p.dimensions / 2.0});
        break;
      case PrimitiveKind::kGroundPlane:
        planes_.push_back(p.center.z());
        break;
      case PrimitiveKind::kSparseBlob: {
        // Uniform placement inside the scatter ball, independent of run seed.
        std::mt19937_64 rng = make_rng(p.layout_seed, 0xB10Bu, 0);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double scatter = p.dimensions.x();
        for (int i = 0; i < p.count; ++i) {
          Vec3 offset;
          do {
            offset = Vec3(u(rng), u(rng), u(rng));
          } while (offset.squaredNorm() > 1.0);
          spheres_.push_back({p.center + scatter * offset, p.dimensions.y()});
        }
        break;
      }
    }
  }
}

std::optional<double> Scene::intersect(const Vec3& origin, const Vec3& dir,
                                       double max_range) const {
  double best = kInf;
  for (const auto& s : spheres_) best = std::min(best, ray_sphere(origin, dir, s.center, s.radius));
  for (const auto& b : boxes_) best = std::min(best, ray_box(origin, dir, b.center, b.half));
  for (double z : planes_) {
    if (dir.z() != 0.0) {
      const double t = (z - origin.z()) / dir.z();
      if (t > 0.0) best = std::min(best, t);
    }
  }
  if (best <= max_range) return best;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2) throw std::invalid_argument("trajectory needs >= 2 waypoints");
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (!(waypoints_[i].time > waypoints_[i - 1].time)) {
      throw std::invalid_argument("trajectory waypoint times must be strictly increasing");
    }
  }
}

Waypoint Trajectory::sample(double t) const {
  if (waypoints_.empty()) return Waypoint{t, Vec3::Zero(), {}};
  if (t <= waypoints_.front().time) return waypoints_.front();
  if (t >= waypoints_.back().time) return waypoints_.back();
  const auto hi = std::upper_bound(waypoints_.begin(), waypoints_.end(), t,
                                   [](double v, const Waypoint& w) { return v < w.time; });
  const auto lo = hi - 1;
  const double a = (t - lo->time) / (hi->time - lo->time);
  Waypoint w;
  w.time = t;
  w.position = (1.0 - a) * lo->position + a * hi->position;
  w.attitude.rx = (1.0 - a) * lo->attitude.rx + a * hi->attitude.rx;
  w.attitude.ry = (1.0 - a) * lo->attitude.ry + a * hi->attitude.ry;
  w.attitude.rz = (1.0 - a) * lo->attitude.rz + a * hi->attitude.rz;
  return w;
}

Vec3 Trajectory::position_at(double t) const { return sample(t).position; }

Rot3 Trajectory::rotation_at(double t) const { return from_euler_xyz(sample(t).attitude); }

Pose Trajectory::pose_at(double t, Frame body) const {
  const Waypoint w = sample(t);
  Pose p;
  p.parent = Frame::kWorld;
  p.child = body;
  p.rotation = from_euler_xyz(w.attitude);
  p.translation = w.position;
  return p;
}

Vec3 Trajectories::relative_position(double t) const {
  return compose(vehicle_pose(t).inverse(), drone_pose(t)).translation;
}

Rot3 Trajectories::relative_rotation(double t) const {
  return compose(vehicle_pose(t).inverse(), drone_pose(t)).rotation;
}

// ---------------------------------------------------------------------------
// LiDAR + motor
// ---------------------------------------------------------------------------

LidarModel LidarModel::vlp16() {
  LidarModel m;
  for (int i = 0; i < 16; ++i) m.beam_offsets.push_back(deg2rad(-15.0 + 2.0 * i));
  m.azimuth_resolution = deg2rad(0.2);
  m.spin_rate_hz = 10.0;
  m.range_sigma = 0.0;
  m.max_range = 100.0;
  return m;
}

double LidarModel::firing_interval() const {
  return azimuth_resolution / (2.0 * kPi * spin_rate_hz);
}

double LidarModel::points_per_second() const {
  return static_cast<double>(beam_offsets.size()) / firing_interval();
}

void LidarModel::validate() const {
  if (beam_offsets.size() < 2) throw std::invalid_argument("lidar needs >= 2 beams");
  if (!(azimuth_resolution > 0.0)) throw std::invalid_argument("lidar azimuth resolution must be > 0");
  if (!(spin_rate_hz > 0.0)) throw std::invalid_argument("lidar spin rate must be > 0");
  if (!(range_sigma >= 0.0)) throw std::invalid_argument("lidar range sigma must be >= 0");
  if (!(max_range > 0.0)) throw std::invalid_argument("lidar max range must be > 0");
}

MotorState MotorState::sweep(double start_angle, double rpm) {
  MotorState m;
  m.mode = MotorMode::kSweep;
  m.angle = start_angle;
  m.angular_velocity = rpm * 2.0 * kPi / 60.0;
  return m;
}

MotorState MotorState::vibrate(double center, double amplitude, double rpm, double period) {
  MotorState m;
  m.mode = MotorMode::kVibrate;
  m.angle = center;
  m.vibrate_center = center;
  m.vibrate_amplitude = amplitude;
  m.angular_velocity = rpm * 2.0 * kPi / 60.0;
  m.vibrate_period = period;
  return m;
}

double MotorState::frame_duration() const {
  if (mode == MotorMode::kSweep) return sweep_extent / angular_velocity;
  return vibrate_period;
}

double MotorState::angle_at(double dt) const {
  if (mode == MotorMode::kSweep) return angle + angular_velocity * dt;
  // Triangle wave between center ± amplitude at constant stroke speed,
  // starting at the center heading toward +amplitude.
  const double stroke = 4.0 * vibrate_amplitude;
  const double s = std::fmod(angular_velocity * dt + vibrate_amplitude, stroke);
  const double offset = s <= 2.0 * vibrate_amplitude ? s - vibrate_amplitude
                                                     : 3.0 * vibrate_amplitude - s;
  return vibrate_center + offset;
}

void MotorState::validate() const {
  if (!(angular_velocity > 0.0)) throw std::invalid_argument("motor angular velocity must be > 0");
  if (mode == MotorMode::kSweep) {
    if (!(sweep_extent >= kPi)) throw std::invalid_argument("sweep must cover >= 180 deg");
  } else {
    if (!(vibrate_amplitude > 0.0)) throw std::invalid_argument("vibration amplitude must be > 0");
    if (!(vibrate_period > 0.0)) throw std::invalid_argument("vibration period must be > 0");
  }
}

Vec3 beam_direction(double motor_angle, double spin_angle, double beam_offset) {
  const double cphi = std::cos(motor_angle), sphi = std::sin(motor_angle);
  const Vec3 horizontal(cphi, sphi, 0.0);
  const Vec3 normal(-sphi, cphi, 0.0);
  const Vec3 up = Vec3::UnitZ();
  const double cb = std::cos(beam_offset);
  return cb * (std::cos(spin_angle) * horizontal + std::sin(spin_angle) * up) +
         std::sin(beam_offset) * normal;
}

std::vector<Vec3> ScanFrame::positions() const {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.position);
  return out;
}

// ---------------------------------------------------------------------------
// Ray casting
// ---------------------------------------------------------------------------

ScanFrame simulate_frame(const ScanContext& ctx, const MotorState& motor, double t0,
                         std::uint64_t seed) {
  if (ctx.scene == nullptr || ctx.trajectories == nullptr) {
    throw std::invalid_argument("scan context is incomplete");
  }
  ctx.lidar.validate();
  motor.validate();

  const double duration = motor.frame_duration();
  ScanFrame frame;
  frame.t_start = t0;
  frame.t_end = t0 + duration;
  frame.t_ref = t0 + 0.5 * duration;

  const Pose ref = ctx.trajectories->vehicle_pose(frame.t_ref);
  const Pose ref_inv = ref.inverse();
  const double dt = ctx.lidar.firing_interval();
  const auto firings = static_cast<std::int64_t>(std::floor(duration / dt));
  const Vec3 drone_half = Vec3::Constant(ctx.drone.width / 2.0);

  std::mt19937_64 rng = make_rng(seed, 0x5CA1u, 0);
  std::normal_distribution<double> noise(0.0, 1.0);

  for (std::int64_t k = 0; k < firings; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const double phi = motor.angle_at(t - t0);
    const double alpha = std::fmod(2.0 * kPi * ctx.lidar.spin_rate_hz * t, 2.0 * kPi);
    const Pose vehicle = ctx.trajectories->vehicle_pose(t);
    const Pose drone = ctx.trajectories->drone_pose(t);
    // Emission-time vehicle frame -> reference vehicle frame.
    const Pose to_ref = compose(ref_inv, vehicle);

    for (double beta : ctx.lidar.beam_offsets) {
      const Vec3 dir_v = beam_direction(phi, alpha, beta);
      const Vec3 dir_w = vehicle.rotation * dir_v;
      double range = kInf;
      bool on_drone = false;
      if (auto hit = ctx.scene->intersect(vehicle.translation, dir_w, ctx.lidar.max_range)) {
        range = *hit;
      }
      if (ctx.drone_present) {
        const double td = ray_oriented_box(vehicle.translation, dir_w, drone, drone_half);
        if (td < range && td <= ctx.lidar.max_range) {
          range = td;
          on_drone = true;
        }
      }
      if (!std::isfinite(range)) continue;
      if (ctx.lidar.range_sigma > 0.0) range += ctx.lidar.range_sigma * noise(rng);
      if (!(range > 0.0) || range > ctx.lidar.max_range) continue;
      frame.points.push_back({to_ref.apply(range * dir_v), t, on_drone});
    }
  }
  return frame;
}

ScanFrame simulate_full_scan(const ScanContext& ctx, const MotorState& motor, double t0,
                             std::uint64_t seed) {
  if (motor.mode != MotorMode::kSweep) throw std::invalid_argument("full scan needs sweep mode");
  return simulate_frame(ctx, motor, t0, seed);
}

ScanFrame simulate_vibration_frame(const ScanContext& ctx, const MotorState& motor, double t0,
                                   std::uint64_t seed) {
  if (motor.mode != MotorMode::kVibrate) throw std::invalid_argument("vibration frame needs vibrate mode");
  return simulate_frame(ctx, motor, t0, seed);
}

// ---------------------------------------------------------------------------
// Indirect observations
// ---------------------------------------------------------------------------

void IndirectObsModel::validate() const {
  if (!(vd_sigma >= 0.0) || !(ego_sigma >= 0.0)) {
    throw std::invalid_argument("observation noise must be >= 0");
  }
  VanishingMatrix check(world_axes);  // throws on collinear axes
  (void)check;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream, static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Vec3 perturb_direction(const Vec3& v, double sigma, std::mt19937_64& rng) {
  const Vec3 unit = v.normalized();
  if (sigma <= 0.0) return unit;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 axis;
  do {
    axis = unit.cross(Vec3(gauss(rng), gauss(rng), gauss(rng)));
  } while (axis.norm() < 1e-6);
  const double angle = std::abs(sigma * gauss(rng));
  return (Rot3::from_axis_angle(axis, angle) * unit).normalized();
}

VanishingMatrix observe_vds(const Pose& camera, const IndirectObsModel& model,
                            std::uint64_t seed) {
  std::mt19937_64 rng = make_rng(seed, 0x7D5u, 0);
  const Rot3 world_to_camera = camera.rotation.inverse();
  Mat3 cols;
  for (int i = 0; i < 3; ++i) {
    cols.col(i) = perturb_direction(world_to_camera * Vec3(model.world_axes.col(i)),
                                    model.vd_sigma, rng);
  }
  if (model.scramble) {
    std::array<int, 3> order{0, 1, 2};
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution flip(0.5);
    Mat3 scrambled;
    for (int i = 0; i < 3; ++i) scrambled.col(i) = (flip(rng) ? -1.0 : 1.0) * cols.col(order[i]);
    cols = scrambled;
  }
  return VanishingMatrix(cols);
}

Vec3 observe_ego_direction(const Pose& drone_i, const Pose& drone_j, double sigma,
                           std::uint64_t seed) {
  const Vec3 motion_world = drone_j.translation - drone_i.translation;
  if (!(motion_world.norm() > 0.0)) throw DegenerateGeometry("no motion between frames");
  const Vec3 motion_body = drone_i.rotation.inverse() * motion_world;
  std::mt19937_64 rng = make_rng(seed, 0xE60u, 0);
  return perturb_direction(motion_body, sigma, rng);
}

}  // namespace relpose
