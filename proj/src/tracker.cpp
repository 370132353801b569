#include "relpose/tracker.hpp"

#include <cmath>
#include <stdexcept>

#include "relpose/errors.hpp"
#include "relpose/scan_sim.hpp"

namespace relpose {

void MeanShiftParams::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("mean shift radius must be > 0");
  if (iterations < 1 || track_iterations < 1) {
    throw std::invalid_argument("mean shift iterations must be >= 1");
  }
  if (!(bandwidth > 0.0)) throw std::invalid_argument("mean shift bandwidth must be > 0");
  if (max_misses < 1) throw std::invalid_argument("max misses must be >= 1");
}

namespace {

std::vector<Vec3> neighborhood(std::span<const Vec3> points, const Vec3& center, double radius) {
  std::vector<Vec3> out;
  const double r2 = radius * radius;
  for (const Vec3& p : points) {
    if ((p - center).squaredNorm() <= r2) out.push_back(p);
  }
  return out;
}

Vec3 weighted_mean(const std::vector<Vec3>& support, const Vec3& at, double bandwidth) {
  Vec3 num = Vec3::Zero();
  double den = 0.0;
  for (const Vec3& p : support) {
    const double w = std::exp(-(p - at).squaredNorm() / bandwidth);
    num += w * p;
    den += w;
  }
  if (!(den > 0.0)) throw TargetLost("target lost");
  return num / den;
}

void set_vibration_center(TrackState& s) {
  s.vibration_azimuth = std::atan2(s.estimate.y(), s.estimate.x());
  s.vibration_elevation = std::atan2(s.estimate.z(), std::hypot(s.estimate.x(), s.estimate.y()));
}

}  // namespace

Vec3 mean_shift_refine(std::span<const Vec3> points, const Vec3& seed,
                       const MeanShiftParams& params, int iterations) {
  std::vector<Vec3> support = neighborhood(points, seed, params.radius);
  if (support.empty()) throw TargetLost("target lost");
  Vec3 estimate = seed;
  for (int n = 0; n < iterations; ++n) {
    if (params.requery && n > 0) {
      support = neighborhood(points, estimate, params.radius);
      if (support.empty()) throw TargetLost("target lost");
    }
    estimate = weighted_mean(support, estimate, params.bandwidth);
  }
  return estimate;
}

const char* status_name(TrackStatus s) {
  switch (s) {
    case TrackStatus::kUnlocked: return "unlocked";
    case TrackStatus::kLocked: return "locked";
    case TrackStatus::kLost: return "lost";
  }
  return "unknown";
}

TrackState acquire(const ScanFrame& sweep, const KernelParams& kernel,
                   const ProjectionParams& proj, const MeanShiftParams& params) {
  params.validate();
  const std::vector<Vec3> points = sweep.positions();
  const DepthImage image = project(points, proj);
  const Detection det = detect(image, kernel, proj);

  TrackState state;
  state.estimate = mean_shift_refine(points, det.position, params, params.iterations);
  state.status = TrackStatus::kLocked;
  state.history.push_back({sweep.t_ref, state.estimate});
  set_vibration_center(state);
  return state;
}

TrackState track_step(const TrackState& state, const ScanFrame& frame,
                      const MeanShiftParams& params) {
  if (state.status != TrackStatus::kLocked) return state;
  TrackState next = state;
  const std::vector<Vec3> points = frame.positions();
  try {
    next.estimate = mean_shift_refine(points, state.estimate, params, params.track_iterations);
  } catch (const TargetLost&) {
    if (++next.misses >= params.max_misses) next.status = TrackStatus::kLost;
    return next;
  }
  next.misses = 0;
  if (next.history.empty() || frame.t_ref > next.history.back().time) {
    next.history.push_back({frame.t_ref, next.estimate});
  }
  set_vibration_center(next);
  return next;
}

}  // namespace relpose
