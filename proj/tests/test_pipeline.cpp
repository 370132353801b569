#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relpose/errors.hpp"
#include "relpose/pipeline.hpp"

using namespace relpose;

namespace {

const char* kScenario =
    "schema_version = 1\n"
    "seed = 3\n"
    "duration = 12\n"
    "scene.0.kind = ground-plane\n"
    "scene.0.center = 0, 0, -1.5\n"
    "tracker.center_offset = 0.2\n"
    "drone.waypoint.0 = 0, 4, -3, 8, 0\n"
    "drone.waypoint.1 = 12, 4, 6, 8, 20\n";

FrameRecord frame(double t, const Vec3& est, const Vec3& truth) {
  FrameRecord f;
  f.time = t;
  f.est_position = est;
  f.true_position = truth;
  f.status = TrackStatus::kLocked;
  f.rotation_valid = true;
  return f;
}

std::string csv(const RunRecord& r) {
  std::ostringstream os;
  write_trajectory_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("metrics of a perfect estimator are zero") {
  RunRecord r;
  for (int k = 0; k < 5; ++k) r.frames.push_back(frame(k, {1, 2, 3}, {1, 2, 3}));
  r.k_init = 0;
  const MetricsReport m = compute_metrics(r);
  CHECK(m.position_rmse == Vec3::Zero());
  REQUIRE(m.rotation_rmse_deg);
  CHECK(*m.rotation_rmse_deg == Vec3::Zero());
  CHECK(m.locked_frames == 5);
}

TEST_CASE("metrics arithmetic") {
  RunRecord bias;
  for (int k = 0; k < 4; ++k) bias.frames.push_back(frame(k, {0.3, 0, 0}, {0, 0, 0}));
  const MetricsReport b = compute_metrics(bias);
  CHECK(b.position_rmse.x() == doctest::Approx(0.3));
  CHECK(b.position_rmse.y() == 0.0);
  CHECK(b.position_rmse.z() == 0.0);
  CHECK(b.rotation_whole_run);

  RunRecord two;
  two.frames.push_back(frame(0, {3, 0, 0}, {0, 0, 0}));
  two.frames.push_back(frame(1, {-4, 0, 0}, {0, 0, 0}));
  CHECK(compute_metrics(two).position_rmse.x() == doctest::Approx(std::sqrt(12.5)));
}

TEST_CASE("rotation metrics start at k_init and wrap residuals") {
  RunRecord r;
  for (int k = 0; k < 4; ++k) {
    FrameRecord f = frame(k, {}, {});
    f.true_rotation = rotation_about_z(deg2rad(179.0));
    f.est_rotation = rotation_about_z(k < 2 ? 0.0 : deg2rad(-179.0));
    r.frames.push_back(f);
  }
  r.k_init = 2;
  const MetricsReport m = compute_metrics(r);
  CHECK(m.rotation_frames == 2);
  REQUIRE(m.rotation_rmse_deg);
  CHECK(m.rotation_rmse_deg->z() == doctest::Approx(2.0));
  CHECK_FALSE(m.rotation_whole_run);

  RunRecord none;
  none.frames.push_back(frame(0, {}, {}));
  none.frames.back().rotation_valid = false;
  CHECK_FALSE(compute_metrics(none).rotation_rmse_deg.has_value());
}

TEST_CASE("trajectory csv round trip") {
  RunRecord r;
  r.frames.push_back(frame(0.12, {1, 2, 3}, {1.5, 2.5, 3.5}));
  r.frames.back().est_rotation = from_euler_xyz({0.1, 0.2, 0.3});
  r.frames.push_back(frame(0.24, {1, 2, 3}, {1.5, 2.5, 3.5}));
  r.frames.back().corrected = true;
  r.frames.back().status = TrackStatus::kLost;
  r.frames.push_back(frame(0.36, {1, 2, 3}, {1.5, 2.5, 3.5}));
  r.frames.back().rotation_valid = false;
  r.frames.back().corrected = true;

  const std::string text = csv(r);
  CHECK(text.rfind(std::string(kTrajectoryCsvHeader) + "\n", 0) == 0);
  CHECK(text.find(",nan,nan,nan,") != std::string::npos);
  std::istringstream is(text);
  const RunRecord back = read_trajectory_csv(is);
  REQUIRE(back.frames.size() == 3);
  CHECK(back.k_init == std::optional<std::size_t>(1));
  CHECK(back.frames[1].status == TrackStatus::kLost);
  CHECK_FALSE(back.frames[2].rotation_valid);
  CHECK(geodesic_distance(back.frames[0].est_rotation, r.frames[0].est_rotation) < 1e-7);
  CHECK(csv(back) == text);

  std::istringstream headless("1,2,3\n");
  CHECK_THROWS(read_trajectory_csv(headless));
  std::istringstream short_row(std::string(kTrajectoryCsvHeader) + "\n1,2\n");
  CHECK_THROWS(read_trajectory_csv(short_row));
}

TEST_CASE("noiseless run with a correct prior") {
  const Scenario s = parse_scenario(kScenario);
  const RunRecord r = run(s);
  REQUIRE(r.acquired);
  CHECK(r.acquisition_sweeps == 1);
  REQUIRE(r.frames.size() > 50);
  for (const auto& f : r.frames) {
    CHECK(f.status == TrackStatus::kLocked);
    CHECK((f.est_position - f.true_position).cwiseAbs().maxCoeff() < 0.3);
    CHECK(geodesic_distance(f.est_rotation, f.true_rotation) < 1e-6);
  }
  const MetricsReport m = compute_metrics(r);
  CHECK(m.position_rmse.maxCoeff() < 0.1);
}

TEST_CASE("a 90 degree yaw error is corrected once") {
  const Scenario s = parse_scenario(kScenario, {"rotation.initial_offset_deg=0, 0, 90"});
  const RunRecord r = run(s);
  REQUIRE(r.k_init);
  for (std::size_t k = 0; k < r.frames.size(); ++k) {
    const double err = geodesic_distance(r.frames[k].est_rotation, r.frames[k].true_rotation);
    if (k < *r.k_init) {
      CHECK(err == doctest::Approx(kPi / 2).epsilon(1e-6));
      CHECK_FALSE(r.frames[k].corrected);
    } else {
      CHECK(err < 1e-6);
      CHECK(r.frames[k].corrected);
    }
  }
}

TEST_CASE("runs are deterministic and exports match") {
  const Scenario s = parse_scenario(kScenario, {"lidar.range_sigma=0.03", "vd.sigma_deg=1"});
  const RunRecord a = run(s);
  const RunRecord b = run(s);
  CHECK(csv(a) == csv(b));
  const RunRecord c = run(parse_scenario(kScenario, {"lidar.range_sigma=0.03", "vd.sigma_deg=1", "seed=4"}));
  CHECK(csv(a) != csv(c));

  const auto dir = std::filesystem::temp_directory_path() / "relpose_export_test";
  std::filesystem::remove_all(dir);
  const MetricsReport m = compute_metrics(a);
  export_run(a, m, s, dir);

  std::ifstream tin(dir / "trajectory.csv");
  std::stringstream traj;
  traj << tin.rdbuf();
  CHECK(traj.str() == csv(a));
  std::size_t rows = 0;
  for (char ch : traj.str()) rows += ch == '\n';
  CHECK(rows == a.frames.size() + 1);

  std::ifstream min(dir / "metrics.txt");
  std::stringstream metrics;
  metrics << min.rdbuf();
  std::ostringstream expected;
  write_metrics(expected, m);
  CHECK(metrics.str() == expected.str());

  std::ifstream sin(dir / "scenario.txt");
  std::stringstream echo;
  echo << sin.rdbuf();
  CHECK(csv(run(parse_scenario(echo.str()))) == csv(a));
  std::filesystem::remove_all(dir);
}

TEST_CASE("export surfaces the failing path") {
  const auto blocker = std::filesystem::temp_directory_path() / "relpose_blocker_file";
  { std::ofstream(blocker) << "x"; }
  RunRecord r;
  try {
    export_run(r, compute_metrics(r), parse_scenario(kScenario), blocker / "out");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("relpose_blocker_file") != std::string::npos);
  }
  std::filesystem::remove(blocker);
}

TEST_CASE("acquisition failure is reported, not thrown") {
  const Scenario s = parse_scenario(
      "schema_version = 1\nseed = 1\nduration = 6\n"
      "drone.waypoint.0 = 0, 0, 0, 400\ndrone.waypoint.1 = 6, 0, 0, 400\n");
  const RunRecord r = run(s);
  CHECK_FALSE(r.acquired);
  CHECK(r.frames.empty());
  CHECK(r.acquisition_sweeps == 2);
  const MetricsReport m = compute_metrics(r);
  CHECK_FALSE(m.acquired);
  CHECK_FALSE(m.rotation_rmse_deg.has_value());
}
