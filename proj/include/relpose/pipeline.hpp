#ifndef RELPOSE_PIPELINE_HPP
#define RELPOSE_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relpose/geom.hpp"
#include "relpose/scenario.hpp"
#include "relpose/tracker.hpp"

namespace relpose {

struct FrameRecord {
  double time = 0.0;
  Vec3 est_position = Vec3::Zero();
  Vec3 true_position = Vec3::Zero();
  Rot3 est_rotation;
  Rot3 true_rotation;
  TrackStatus status = TrackStatus::kUnlocked;
  bool corrected = false;       // frame is at or after k_init
  bool rotation_valid = false;  // an estimate of R_{G→D} exists
  double compute_ms = 0.0;      // estimator time, excluding simulation
};

struct RunRecord {
  bool acquired = false;
  double acquisition_time = 0.0;        // simulated seconds until first lock
  double acquisition_compute_ms = 0.0;  // detector + refinement wall time
  int acquisition_sweeps = 0;
  std::optional<std::size_t> k_init;
  std::vector<FrameRecord> frames;
};

/// Sweep, acquire, then per vibration frame: track, estimate R_{G→D} from
/// vanishing directions, smooth it, accumulate motion and apply the yaw
/// correction once. Deterministic for a given scenario (seed included).
RunRecord run(const Scenario& scenario);

struct MetricsReport {
  std::size_t frames = 0;
  std::size_t locked_frames = 0;
  Vec3 position_rmse = Vec3::Zero();        // m, over locked frames
  std::optional<Vec3> rotation_rmse_deg;    // rx, ry, rz
  std::size_t rotation_frames = 0;
  bool rotation_whole_run = false;  // no correction fired; RMSE covers every frame
  std::optional<std::size_t> k_init;
  bool acquired = false;
  double acquisition_time = 0.0;
  double acquisition_compute_ms = 0.0;
  double mean_frame_compute_ms = 0.0;
};

/// Per-axis position RMSE over locked frames and per-angle Euler RMSE (angle
/// residuals wrapped to (−180°, 180°]) from k_init on.
MetricsReport compute_metrics(const RunRecord& record);

/// Header row of the trajectory CSV.
extern const char* const kTrajectoryCsvHeader;

void write_trajectory_csv(std::ostream& os, const RunRecord& record);
/// Rebuilds a record from a trajectory CSV (timing fields are zero).
RunRecord read_trajectory_csv(std::istream& is);
void write_metrics(std::ostream& os, const MetricsReport& report);

/// Writes trajectory.csv, metrics.txt and scenario.txt into `dir` (created
/// if needed). Throws std::runtime_error naming the path on I/O failure.
void export_run(const RunRecord& record, const MetricsReport& report, const Scenario& scenario,
                const std::filesystem::path& dir);

}  // namespace relpose

#endif  // RELPOSE_PIPELINE_HPP
