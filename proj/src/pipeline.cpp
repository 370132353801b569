#include "relpose/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "relpose/errors.hpp"

namespace relpose {

namespace {

enum Stream : std::uint32_t {
  kSweepNoise = 1,
  kFrameNoise = 2,
  kVehicleVds = 3,
  kDroneVds = 4,
  kEgoMotion = 5,
  kVehiclePose = 6,
};

std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t index) {
  return make_rng(base, stream, index)();
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

// Vehicle pose as reported to the estimator.
Pose measured_vehicle_pose(const Scenario& sc, double t, std::uint64_t index) {
  Pose p = sc.trajectories.vehicle_pose(t);
  if (sc.vehicle_position_noise <= 0.0 && sc.vehicle_rotation_noise <= 0.0) return p;
  std::mt19937_64 rng = make_rng(sc.seed, kVehiclePose, index);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Vec3 dp(gauss(rng), gauss(rng), gauss(rng));
  const Vec3 axis(gauss(rng), gauss(rng), gauss(rng));
  const double angle = sc.vehicle_rotation_noise * gauss(rng);
  p.translation += sc.vehicle_position_noise * dp;
  if (axis.norm() > 0.0) p.rotation = p.rotation * Rot3::from_axis_angle(axis, angle);
  return p;
}

Vec3 reported_position(const Vec3& mode, double center_offset) {
  const double n = mode.norm();
  if (center_offset <= 0.0 || !(n > 0.0)) return mode;
  return mode + center_offset * (mode / n);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

RunRecord run(const Scenario& sc) {
  sc.validate();
  RunRecord record;

  const Scene scene(sc.scene);
  ScanContext ctx;
  ctx.scene = &scene;
  ctx.trajectories = &sc.trajectories;
  ctx.drone = sc.drone;
  ctx.lidar = sc.lidar;

  auto sweep_motor = [&] {
    MotorState m = MotorState::sweep(0.0, sc.motor.sweep_rpm);
    m.sweep_extent = sc.motor.sweep_extent;
    return m;
  };

  // Initial acquisition: full sweeps until the detector locks on.
  double t = 0.0;
  TrackState track;
  std::uint64_t sweep_index = 0;
  while (track.status != TrackStatus::kLocked) {
    const MotorState motor = sweep_motor();
    if (t + motor.frame_duration() > sc.duration) break;
    const ScanFrame sweep =
        simulate_full_scan(ctx, motor, t, derive_seed(sc.seed, kSweepNoise, sweep_index++));
    ++record.acquisition_sweeps;
    const auto start = std::chrono::steady_clock::now();
    try {
      track = acquire(sweep, sc.kernel, sc.projection, sc.meanshift);
    } catch (const NoCandidates&) {
    } catch (const TargetLost&) {
    }
    record.acquisition_compute_ms += elapsed_ms(start);
    t = sweep.t_end;
  }
  if (track.status != TrackStatus::kLocked) return record;
  record.acquired = true;
  record.acquisition_time = t;

  // Matching prior: the true initial R_{G→D} with a world-frame attitude error.
  const Rot3 vehicle_rot0 = sc.trajectories.vehicle_pose(t).rotation;
  const Rot3 drone_rot0 = sc.trajectories.drone_pose(t).rotation;
  const Rot3 initial_prior =
      (vehicle_rot0.inverse() * from_euler_xyz(sc.initial_offset) * drone_rot0).orthonormalized();

  RotationFilterState filter;
  filter.max_rate = sc.rotation_max_rate;
  MotionAccumulator accumulator(sc.motion);

  std::vector<Vec3> drone_world;          // tracked drone position in the world, per frame
  std::vector<Rot3> vehicle_rotations;    // measured R_G, per frame
  std::vector<Rot3> grd_estimates;        // filtered R_{G→D}, per frame
  std::vector<bool> grd_valid;
  std::vector<Pose> drone_truth;          // feeds the synthetic self-motion observation

  for (std::uint64_t k = 0;; ++k) {
    ScanFrame frame;
    const bool locked = track.status == TrackStatus::kLocked;
    const MotorState motor =
        locked ? MotorState::vibrate(track.vibration_azimuth, sc.motor.vibrate_amplitude,
                                     sc.motor.vibrate_rpm, sc.motor.vibrate_period)
               : sweep_motor();
    if (t + motor.frame_duration() > sc.duration) break;

    double compute_ms = 0.0;
    bool tracked = false;
    if (locked) {
      frame = simulate_vibration_frame(ctx, motor, t, derive_seed(sc.seed, kFrameNoise, k));
      const auto start = std::chrono::steady_clock::now();
      const std::size_t before = track.history.size();
      track = track_step(track, frame, sc.meanshift);
      tracked = track.history.size() > before;
      compute_ms += elapsed_ms(start);
    } else {
      frame = simulate_full_scan(ctx, motor, t, derive_seed(sc.seed, kSweepNoise, sweep_index++));
      const auto start = std::chrono::steady_clock::now();
      try {
        track = acquire(frame, sc.kernel, sc.projection, sc.meanshift);
        tracked = true;
      } catch (const NoCandidates&) {
      } catch (const TargetLost&) {
      }
      compute_ms += elapsed_ms(start);
    }
    t = frame.t_end;
    const double tref = frame.t_ref;

    FrameRecord row;
    row.time = tref;
    row.status = track.status;
    row.est_position = reported_position(track.estimate, sc.center_offset);
    row.true_position = sc.trajectories.relative_position(tref);
    row.true_rotation = sc.trajectories.relative_rotation(tref);

    const Pose vehicle_meas = measured_vehicle_pose(sc, tref, k);
    const Pose vehicle_true = sc.trajectories.vehicle_pose(tref);
    const Pose drone_true = sc.trajectories.drone_pose(tref);
    const VanishingMatrix vds_vehicle =
        observe_vds(vehicle_true, sc.indirect, derive_seed(sc.seed, kVehicleVds, k));
    const VanishingMatrix vds_drone =
        observe_vds(drone_true, sc.indirect, derive_seed(sc.seed, kDroneVds, k));

    const auto start = std::chrono::steady_clock::now();
    const Rot3 prior = filter.initialized ? filter.rotation : initial_prior;
    try {
      const MatchResult match = match_vds(vds_vehicle, vds_drone, prior);
      const Rot3 measured = estimate_rotation(vds_vehicle, vds_drone, match, sc.rotation_policy);
      filter = filter_rotation(filter, measured, tref);
    } catch (const Error&) {
      // Keep the previous estimate when this frame's directions cannot be matched.
    }

    drone_world.push_back(tracked ? Vec3(vehicle_meas.apply(row.est_position))
                                  : Vec3::Constant(kNaN));
    vehicle_rotations.push_back(vehicle_meas.rotation);
    grd_estimates.push_back(filter.rotation);
    grd_valid.push_back(filter.initialized);
    drone_truth.push_back(drone_true);

    const auto gap = static_cast<std::size_t>(sc.motion.gap);
    if (!record.k_init && k >= gap) {
      const std::size_t i = k - gap;
      std::optional<MotionPair> pair;
      try {
        if (!grd_valid[i]) throw DegenerateGeometry("no rotation estimate at frame i");
        const Vec3 ego = observe_ego_direction(drone_truth[i], drone_truth[k],
                                               sc.indirect.ego_sigma,
                                               derive_seed(sc.seed, kEgoMotion, k));
        pair = accumulate_motion(accumulator, drone_world, k,
                                 self_motion_world(vehicle_rotations[i], grd_estimates[i], ego));
      } catch (const DegenerateGeometry&) {
        accumulator.reset();
      }
      if (pair) {
        try {
          const Rot3 corrected =
              correct_rotation(filter.rotation, vehicle_meas.rotation, pair->observed, pair->self);
          Rot3 rematched = corrected;
          try {
            const MatchResult match = match_vds(vds_vehicle, vds_drone, corrected);
            rematched = estimate_rotation(vds_vehicle, vds_drone, match, sc.rotation_policy);
          } catch (const Error&) {
          }
          filter = reset_rotation(filter, rematched, tref);
          grd_estimates.back() = filter.rotation;
          record.k_init = k;
        } catch (const DegenerateGeometry&) {
          accumulator.reset();
        }
      }
    }
    compute_ms += elapsed_ms(start);

    row.est_rotation = filter.rotation;
    row.rotation_valid = filter.initialized;
    row.corrected = record.k_init.has_value();
    row.compute_ms = compute_ms;
    record.frames.push_back(row);
  }
  return record;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

MetricsReport compute_metrics(const RunRecord& record) {
  MetricsReport rep;
  rep.frames = record.frames.size();
  rep.k_init = record.k_init;
  rep.acquired = record.acquired;
  rep.acquisition_time = record.acquisition_time;
  rep.acquisition_compute_ms = record.acquisition_compute_ms;

  Vec3 pos_sq = Vec3::Zero();
  double compute_sum = 0.0;
  for (const auto& f : record.frames) {
    compute_sum += f.compute_ms;
    if (f.status != TrackStatus::kLocked) continue;
    ++rep.locked_frames;
    pos_sq += (f.est_position - f.true_position).cwiseAbs2();
  }
  if (rep.locked_frames > 0) {
    rep.position_rmse = (pos_sq / static_cast<double>(rep.locked_frames)).cwiseSqrt();
  }
  if (!record.frames.empty()) {
    rep.mean_frame_compute_ms = compute_sum / static_cast<double>(record.frames.size());
  }

  rep.rotation_whole_run = !record.k_init.has_value();
  const std::size_t first = record.k_init.value_or(0);
  Vec3 rot_sq = Vec3::Zero();
  for (std::size_t k = first; k < record.frames.size(); ++k) {
    const auto& f = record.frames[k];
    if (!f.rotation_valid) continue;
    EulerXYZ est, truth;
    try {
      est = euler_xyz(f.est_rotation);
      truth = euler_xyz(f.true_rotation);
    } catch (const GimbalLock&) {
      continue;
    }
    const Vec3 d(rad2deg(wrap_angle(est.rx - truth.rx)), rad2deg(wrap_angle(est.ry - truth.ry)),
                 rad2deg(wrap_angle(est.rz - truth.rz)));
    rot_sq += d.cwiseAbs2();
    ++rep.rotation_frames;
  }
  if (rep.rotation_frames > 0) {
    rep.rotation_rmse_deg = (rot_sq / static_cast<double>(rep.rotation_frames)).cwiseSqrt();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

const char* const kTrajectoryCsvHeader =
    "time,est_x,est_y,est_z,true_x,true_y,true_z,"
    "est_rx_deg,est_ry_deg,est_rz_deg,true_rx_deg,true_ry_deg,true_rz_deg,status,corrected";

namespace {

std::string fixed(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  // Avoid "-0.000000" so identical values always print identically.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::string exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::array<double, 3> euler_deg_or_nan(const Rot3& r, bool valid) {
  if (!valid) return {kNaN, kNaN, kNaN};
  try {
    const EulerXYZ e = euler_xyz(r);
    return {rad2deg(e.rx), rad2deg(e.ry), rad2deg(e.rz)};
  } catch (const GimbalLock&) {
    return {kNaN, kNaN, kNaN};
  }
}

double parse_cell(const std::string& s, std::size_t line) {
  if (s == "nan") return kNaN;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("trajectory csv line " + std::to_string(line) + ": bad number '" +
                             s + "'");
  }
  return v;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const RunRecord& record) {
  os << kTrajectoryCsvHeader << '\n';
  for (const auto& f : record.frames) {
    const auto est = euler_deg_or_nan(f.est_rotation, f.rotation_valid);
    const auto truth = euler_deg_or_nan(f.true_rotation, true);
    os << fixed(f.time) << ',' << fixed(f.est_position.x()) << ',' << fixed(f.est_position.y())
       << ',' << fixed(f.est_position.z()) << ',' << fixed(f.true_position.x()) << ','
       << fixed(f.true_position.y()) << ',' << fixed(f.true_position.z()) << ',' << fixed(est[0])
       << ',' << fixed(est[1]) << ',' << fixed(est[2]) << ',' << fixed(truth[0]) << ','
       << fixed(truth[1]) << ',' << fixed(truth[2]) << ',' << status_name(f.status) << ','
       << (f.corrected ? 1 : 0) << '\n';
  }
}

RunRecord read_trajectory_csv(std::istream& is) {
  RunRecord record;
  std::string line;
  if (!std::getline(is, line) || line != kTrajectoryCsvHeader) {
    throw std::runtime_error("trajectory csv: missing or unexpected header row");
  }
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 15) {
      throw std::runtime_error("trajectory csv line " + std::to_string(line_no) +
                               ": expected 15 columns");
    }
    double v[13];
    for (int i = 0; i < 13; ++i) v[i] = parse_cell(cells[i], line_no);
    FrameRecord f;
    f.time = v[0];
    f.est_position = {v[1], v[2], v[3]};
    f.true_position = {v[4], v[5], v[6]};
    f.rotation_valid = std::isfinite(v[7]) && std::isfinite(v[8]) && std::isfinite(v[9]);
    if (f.rotation_valid) {
      f.est_rotation = from_euler_xyz({deg2rad(v[7]), deg2rad(v[8]), deg2rad(v[9])});
    }
    if (std::isfinite(v[10]) && std::isfinite(v[11]) && std::isfinite(v[12])) {
      f.true_rotation = from_euler_xyz({deg2rad(v[10]), deg2rad(v[11]), deg2rad(v[12])});
    } else {
      f.rotation_valid = false;
    }
    if (cells[13] == "locked") f.status = TrackStatus::kLocked;
    else if (cells[13] == "lost") f.status = TrackStatus::kLost;
    else if (cells[13] == "unlocked") f.status = TrackStatus::kUnlocked;
    else throw std::runtime_error("trajectory csv line " + std::to_string(line_no) + ": bad status");
    if (cells[14] != "0" && cells[14] != "1") {
      throw std::runtime_error("trajectory csv line " + std::to_string(line_no) +
                               ": bad corrected flag");
    }
    f.corrected = cells[14] == "1";
    if (f.corrected && !record.k_init) record.k_init = record.frames.size();
    record.frames.push_back(f);
  }
  record.acquired = !record.frames.empty();
  return record;
}

void write_metrics(std::ostream& os, const MetricsReport& r) {
  auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
  kv("frames", std::to_string(r.frames));
  kv("locked_frames", std::to_string(r.locked_frames));
  kv("position_rmse_x", exact(r.position_rmse.x()));
  kv("position_rmse_y", exact(r.position_rmse.y()));
  kv("position_rmse_z", exact(r.position_rmse.z()));
  if (r.rotation_rmse_deg) {
    kv("rotation_rmse_rx_deg", exact(r.rotation_rmse_deg->x()));
    kv("rotation_rmse_ry_deg", exact(r.rotation_rmse_deg->y()));
    kv("rotation_rmse_rz_deg", exact(r.rotation_rmse_deg->z()));
  } else {
    kv("rotation_rmse_rx_deg", "absent");
    kv("rotation_rmse_ry_deg", "absent");
    kv("rotation_rmse_rz_deg", "absent");
  }
  kv("rotation_frames", std::to_string(r.rotation_frames));
  kv("rotation_whole_run", r.rotation_whole_run ? "true" : "false");
  kv("k_init", r.k_init ? std::to_string(*r.k_init) : "none");
  kv("acquired", r.acquired ? "true" : "false");
  kv("acquisition_time_s", exact(r.acquisition_time));
  kv("acquisition_compute_ms", exact(r.acquisition_compute_ms));
  kv("mean_frame_compute_ms", exact(r.mean_frame_compute_ms));
}

void export_run(const RunRecord& record, const MetricsReport& report, const Scenario& scenario,
                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  auto write = [](const std::filesystem::path& path, auto&& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
  };
  write(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, record); });
  write(dir / "metrics.txt", [&](std::ostream& os) { write_metrics(os, report); });
  write(dir / "scenario.txt", [&](std::ostream& os) { os << format_scenario(scenario); });
}

}  // namespace relpose
