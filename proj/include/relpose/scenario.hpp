#ifndef RELPOSE_SCENARIO_HPP
#define RELPOSE_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "relpose/depth_image.hpp"
#include "relpose/detector.hpp"
#include "relpose/scan_sim.hpp"
#include "relpose/tracker.hpp"
#include "relpose/vp_rot.hpp"

namespace relpose {

inline constexpr int kSchemaVersion = 1;

struct MotorConfig {
  double sweep_rpm = 11.4;
  double sweep_extent = kPi;
  double vibrate_rpm = 57.2;
  double vibrate_amplitude = deg2rad(5.0);
  double vibrate_period = 0.12;
};

/// Everything needed to reproduce one simulated run.
struct Scenario {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 0;
  double duration = 0.0;  // s

  std::vector<ScenePrimitive> scene;
  DroneModel drone;
  Trajectories trajectories;
  LidarModel lidar = LidarModel::vlp16();
  MotorConfig motor;
  ProjectionParams projection;
  KernelParams kernel;
  MeanShiftParams meanshift;
  // Shift of the refined estimate away from the sensor along the line of
  // sight (m); 0 reports the mean-shift mode as is.
  double center_offset = 0.0;

  IndirectObsModel indirect;
  // World-frame attitude error applied to the true initial R_{G→D} to form
  // the matching prior R_{G→D0}.
  EulerXYZ initial_offset;
  double rotation_max_rate = deg2rad(20.0);
  RotationPolicy rotation_policy = RotationPolicy::kTwoBestPairs;
  MotionParams motion;

  // Noise on the vehicle pose handed to the estimator.
  double vehicle_position_noise = 0.0;   // m
  double vehicle_rotation_noise = 0.0;   // rad

  // Resolved "key = value" text (defaults included) captured by the parser;
  // format_scenario() echoes it verbatim so reloading is bit-exact.
  std::vector<std::pair<std::string, std::string>> settings;

  void validate() const;
};

/// Parses the dotted key = value format. `overrides` are applied after the
/// file contents as additional "key=value" lines. Throws ConfigError.
Scenario parse_scenario(const std::string& text,
                        const std::vector<std::string>& overrides = {});
Scenario load_scenario(const std::string& path,
                       const std::vector<std::string>& overrides = {});

/// Canonical text form: every key, fully resolved. For parsed scenarios this
/// is the captured settings text; programmatic ones are formatted from their
/// values. parse_scenario() of the result reproduces the scenario.
std::string format_scenario(const Scenario& s);

/// Splits "key=value" (whitespace trimmed). Throws ConfigError.
std::pair<std::string, std::string> split_override(const std::string& kv);

}  // namespace relpose

#endif  // RELPOSE_SCENARIO_HPP
