#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "relpose/errors.hpp"
#include "relpose/scan_sim.hpp"
#include "relpose/tracker.hpp"

using namespace relpose;

namespace {

struct World {
  Scene scene;
  Trajectories traj;
  ScanContext ctx;

  explicit World(std::vector<Waypoint> drone, std::vector<ScenePrimitive> prims = {})
      : scene(prims) {
    traj.vehicle = Trajectory({{0.0, Vec3::Zero(), {}}, {1000.0, Vec3::Zero(), {}}});
    traj.drone = Trajectory(std::move(drone));
    ctx.scene = &scene;
    ctx.trajectories = &traj;
  }
};

ScenePrimitive ground() {
  ScenePrimitive g;
  g.kind = PrimitiveKind::kGroundPlane;
  g.center = {0, 0, -1.5};
  return g;
}

}  // namespace

TEST_CASE("mean shift on trivial inputs") {
  MeanShiftParams p;
  const std::vector<Vec3> one{{0.3, 0.2, 5.1}};
  const Vec3 q = mean_shift_refine(one, {0, 0, 5}, p, 1);
  CHECK((q - one[0]).norm() < 1e-15);

  const Vec3 c(1, 2, 3), d(0.2, -0.1, 0.3);
  const std::vector<Vec3> pair{c + d, c - d};
  for (int n = 1; n <= 5; ++n) CHECK((mean_shift_refine(pair, c, p, n) - c).norm() < 1e-15);

  CHECK_THROWS_AS(mean_shift_refine(one, {5, 5, 5}, p), TargetLost);
  CHECK_THROWS_AS(mean_shift_refine(std::vector<Vec3>{}, {0, 0, 0}, p), TargetLost);
}

TEST_CASE("mean shift matches the iterated weighted-mean oracle") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 0.1);
  const Vec3 c(2, -1, 7);
  std::vector<Vec3> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(c + Vec3(g(rng), g(rng), g(rng)));
  MeanShiftParams p;
  const Vec3 seed = c + Vec3(0.3, -0.2, 0.25);
  const Vec3 got = mean_shift_refine(pts, seed, p);
  const auto want = oracle::iterated_weighted_mean(pts, seed, p.radius, p.bandwidth, p.iterations);
  REQUIRE(want);
  CHECK((got - *want).norm() < 0.05);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(got[i] - (*want)[i]) <= 1e-12);
}

TEST_CASE("mean shift iterates stay in the support hull") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({u(rng), u(rng), u(rng)});
  MeanShiftParams p;
  p.radius = 0.8;
  for (int n = 1; n < 8; ++n) {
    const Vec3 e = mean_shift_refine(pts, {0.1, 0.1, 0.1}, p, n);
    Vec3 lo = Vec3::Constant(1e9), hi = Vec3::Constant(-1e9);
    for (const Vec3& q : pts) {
      if ((q - Vec3(0.1, 0.1, 0.1)).norm() > p.radius) continue;
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    CHECK((e.array() >= lo.array()).all());
    CHECK((e.array() <= hi.array()).all());
  }
}

TEST_CASE("requery follows the moving neighbourhood") {
  std::vector<Vec3> pts{{0, 0, 0}, {0.5, 0, 0}};
  for (int i = 0; i < 10; ++i) pts.push_back({0.75, 0, 0});
  MeanShiftParams frozen;
  frozen.radius = 0.6;
  MeanShiftParams requery = frozen;
  requery.requery = true;
  const Vec3 a = mean_shift_refine(pts, Vec3::Zero(), frozen, 20);
  const Vec3 b = mean_shift_refine(pts, Vec3::Zero(), requery, 20);
  CHECK(a.x() < 0.5);
  CHECK(b.x() > 0.6);
}

TEST_CASE("acquire locks on the drone within one sweep") {
  const Vec3 drone(3, 2, 8);
  World w({{0.0, drone, {}}, {100.0, drone, {}}}, {ground()});
  const ScanFrame sweep = simulate_full_scan(w.ctx, MotorState::sweep(0.0), 0.0, 1);
  const TrackState s = acquire(sweep, {}, {}, {});
  CHECK(s.status == TrackStatus::kLocked);
  CHECK(s.history.size() == 1);
  // Within the drone's half diagonal of its centre.
  CHECK((s.estimate - drone).norm() < 0.5 * std::sqrt(3.0) / 2.0);
  CHECK(s.vibration_azimuth == doctest::Approx(std::atan2(drone.y(), drone.x())).epsilon(0.05));
}

TEST_CASE("acquire in empty sky stays unlocked") {
  World w({{0.0, {0, 0, 300}, {}}, {100.0, {0, 0, 300}, {}}});
  w.ctx.drone_present = false;
  const ScanFrame sweep = simulate_full_scan(w.ctx, MotorState::sweep(0.0), 0.0, 1);
  CHECK_THROWS_AS(acquire(sweep, {}, {}, {}), NoCandidates);
  TrackState idle;
  CHECK(track_step(idle, sweep, {}).status == TrackStatus::kUnlocked);
}

TEST_CASE("acquisition near the field of view edge") {
  // 58 deg off the viewing axis is inside the 60 deg cull, 63 deg is outside.
  for (const auto& [off_deg, expect] : {std::pair{58.0, true}, std::pair{63.0, false}}) {
    const double a = deg2rad(off_deg);
    const Vec3 drone(8.0 * std::sin(a), 0.0, 8.0 * std::cos(a));
    World w({{0.0, drone, {}}, {100.0, drone, {}}});
    const ScanFrame sweep = simulate_full_scan(w.ctx, MotorState::sweep(-kPi / 2), 0.0, 2);
    bool locked = false;
    try {
      locked = acquire(sweep, {}, {}, {}).status == TrackStatus::kLocked;
    } catch (const NoCandidates&) {
    }
    CHECK(locked == expect);
  }
}

TEST_CASE("static drone is a tracking fixpoint") {
  const Vec3 drone(2, 1, 7);
  World w({{0.0, drone, {}}, {100.0, drone, {}}});
  TrackState s;
  s.status = TrackStatus::kLocked;
  s.estimate = drone + Vec3(0.1, -0.1, 0.05);
  const ScanFrame f =
      simulate_vibration_frame(w.ctx, MotorState::vibrate(std::atan2(drone.y(), drone.x())), 0.0, 4);
  MeanShiftParams p;
  p.track_iterations = 200;
  s = track_step(s, f, p);
  p.track_iterations = 3;
  for (int k = 0; k < 5; ++k) {
    const Vec3 before = s.estimate;
    ScanFrame again = f;
    again.t_ref += 0.12 * (k + 1);
    s = track_step(s, again, p);
    CHECK((s.estimate - before).norm() < 1e-6);
  }
}

TEST_CASE("tracking a drone moving 0.1 m per frame") {
  const double period = 0.12;
  const Vec3 start(-5, 2, 8);
  const Vec3 end = start + Vec3(0.1 * 100, 0, 0);
  World w({{0.0, start, {}}, {100 * period, end, {}}, {1000.0, end, {}}}, {ground()});
  TrackState s;
  s.status = TrackStatus::kLocked;
  s.estimate = start;
  s.vibration_azimuth = std::atan2(start.y(), start.x());
  double sq = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ScanFrame f = simulate_vibration_frame(w.ctx, MotorState::vibrate(s.vibration_azimuth),
                                                 k * period, 100 + k);
    s = track_step(s, f, {});
    REQUIRE(s.status == TrackStatus::kLocked);
    const Vec3 truth = w.traj.relative_position(f.t_ref);
    CHECK((s.estimate - truth).norm() < 1.0);
    sq += (s.estimate - truth).squaredNorm();
  }
  CHECK(std::sqrt(sq / 100) < 0.2);
  CHECK(s.history.size() == 100);
}

TEST_CASE("teleported drone is lost after max_misses frames") {
  const Vec3 a(3, 0, 8), b(-3, 10, 6);
  World w({{0.0, a, {}}, {1.0, a, {}}, {1.001, b, {}}, {100.0, b, {}}});
  TrackState s;
  s.status = TrackStatus::kLocked;
  s.estimate = a;
  MeanShiftParams p;
  int frames = 0;
  double t = 1.1;
  while (s.status == TrackStatus::kLocked && frames < 50) {
    s = track_step(s, simulate_vibration_frame(w.ctx, MotorState::vibrate(0.0), t, frames), p);
    t += 0.12;
    ++frames;
  }
  CHECK(s.status == TrackStatus::kLost);
  CHECK(frames == p.max_misses);
}
