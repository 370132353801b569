#ifndef RELPOSE_TRACKER_HPP
#define RELPOSE_TRACKER_HPP

#include <span>
#include <vector>

#include "relpose/detector.hpp"
#include "relpose/geom.hpp"

namespace relpose {

struct ScanFrame;

struct MeanShiftParams {
  double radius = 1.0;        // m, support sphere
  int iterations = 10;        // refinement after detection
  int track_iterations = 3;   // per vibration frame
  double bandwidth = 1.0;     // m², weight = exp(-|t - t̂|² / bandwidth)
  bool requery = false;       // re-select the support set every iteration
  int max_misses = 5;         // consecutive empty frames before the track is lost

  void validate() const;
};

/// Gaussian-weighted mean shift. The support set is the points within
/// `radius` of `seed`, selected once unless `params.requery` is set. Runs
/// exactly `iterations` updates. Throws TargetLost if the support is empty.
Vec3 mean_shift_refine(std::span<const Vec3> points, const Vec3& seed,
                       const MeanShiftParams& params, int iterations);
inline Vec3 mean_shift_refine(std::span<const Vec3> points, const Vec3& seed,
                              const MeanShiftParams& params) {
  return mean_shift_refine(points, seed, params, params.iterations);
}

enum class TrackStatus { kUnlocked, kLocked, kLost };

const char* status_name(TrackStatus s);

struct TrackSample {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
};

struct TrackState {
  TrackStatus status = TrackStatus::kUnlocked;
  Vec3 estimate = Vec3::Zero();       // t_{G→D}, vehicle frame
  std::vector<TrackSample> history;   // strictly increasing times
  int misses = 0;
  // Where the motor should vibrate next.
  double vibration_azimuth = 0.0;
  double vibration_elevation = 0.0;
};

/// Detect in the projected full sweep, refine with `params.iterations`
/// mean-shift steps and lock. Propagates NoCandidates.
TrackState acquire(const ScanFrame& sweep, const KernelParams& kernel,
                   const ProjectionParams& proj, const MeanShiftParams& params);

/// One tracking update from a vibration frame. No-op unless locked.
TrackState track_step(const TrackState& state, const ScanFrame& frame,
                      const MeanShiftParams& params);

}  // namespace relpose

#endif  // RELPOSE_TRACKER_HPP
