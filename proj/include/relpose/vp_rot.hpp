#ifndef RELPOSE_VP_ROT_HPP
#define RELPOSE_VP_ROT_HPP

#include <array>
#include <deque>
#include <optional>
#include <span>

#include "relpose/geom.hpp"
#include "relpose/vanishing_matrix.hpp"

namespace relpose {

/// Builds a vanishing matrix from two directions, completing the third with
/// their normalized cross product. Throws DegenerateGeometry when the inputs
/// are within 10° of each other.
VanishingMatrix complete_vd(const Vec3& v1, const Vec3& v2);

/// Correspondence between vehicle columns and (signed) drone columns.
struct MatchResult {
  std::array<int, 3> drone_index{0, 1, 2};  // drone column matched to vehicle column g
  std::array<double, 3> sign{1.0, 1.0, 1.0};
  std::array<double, 3> residual{0.0, 0.0, 0.0};  // radians

  /// Drone columns reordered and sign-corrected to line up with V_G.
  Mat3 aligned(const VanishingMatrix& drone) const;
  /// Vehicle column indices sorted by ascending residual (stable).
  std::array<int, 3> by_residual() const;
};

inline constexpr double kMaxMatchResidual = kPi / 4.0;

/// Smallest-angle correspondence search. Drone directions are rotated into
/// the vehicle frame with `prior`, every vehicle/drone pair is scored over
/// both signs, and pairs are assigned greedily from the smallest residual.
/// Throws AmbiguousCorrespondence if an assigned residual exceeds
/// `max_residual`.
MatchResult match_vds(const VanishingMatrix& vehicle, const VanishingMatrix& drone,
                      const Rot3& prior, double max_residual = kMaxMatchResidual);

enum class RotationPolicy {
  kTwoBestPairs,  // two lowest-residual pairs + cross-product completion
  kAllThree,      // V_G·V_D⁻¹ over all three matched columns
};

/// R_{G→D} = V_G·V_D⁻¹ over matched columns, projected onto SO(3).
Rot3 estimate_rotation(const VanishingMatrix& vehicle, const VanishingMatrix& drone,
                       const MatchResult& match,
                       RotationPolicy policy = RotationPolicy::kTwoBestPairs);

// Rate-limited geodesic smoother standing in for a rotation EKF: each update
// moves toward the measurement by at most max_rate·Δt.
struct RotationFilterState {
  Rot3 rotation;
  double max_rate = deg2rad(20.0);  // rad/s
  double last_time = 0.0;
  bool initialized = false;
};

RotationFilterState filter_rotation(const RotationFilterState& state, const Rot3& measured,
                                    double t);

/// Resets the smoother to `r` at time `t`, bypassing the rate limit.
RotationFilterState reset_rotation(const RotationFilterState& state, const Rot3& r, double t);

struct MotionParams {
  int window = 7;                  // frames summed
  double cone = deg2rad(30.0);     // max pairwise angle inside the window
  int gap = 14;                    // j − i, in tracking frames
  double min_distance = 1.0;       // m, per-frame motion vector threshold

  void validate() const;
};

/// Accumulated drone motion in the world as seen by the vehicle (f) and by
/// the drone itself (f̂).
struct MotionPair {
  Vec3 observed = Vec3::Zero();
  Vec3 self = Vec3::Zero();
};

/// Ring buffer of per-frame motion vectors. Emits once the last `window`
/// vectors are all longer than `min_distance` and pairwise within `cone`.
class MotionAccumulator {
 public:
  explicit MotionAccumulator(MotionParams params = {});

  /// `observed` is t_D(k) − t_D(k − gap) (world, m); `self` the drone's own
  /// motion direction for the same frame pair, rotated into the world.
  std::optional<MotionPair> push(const Vec3& observed, const Vec3& self);
  void reset() { buffer_.clear(); }
  std::size_t size() const { return buffer_.size(); }
  const MotionParams& params() const { return params_; }

 private:
  MotionParams params_;
  std::deque<MotionPair> buffer_;
};

/// f̂ for one frame pair: R_G · R_{G→D0} · Δt_{D→D}.
Vec3 self_motion_world(const Rot3& vehicle_rotation, const Rot3& grd_rotation,
                       const Vec3& self_direction);

/// Feeds frame k from the per-frame world positions of the drone. Frames
/// without a partner `gap` frames back produce nothing.
std::optional<MotionPair> accumulate_motion(MotionAccumulator& acc,
                                            std::span<const Vec3> drone_world,
                                            std::size_t k, const Vec3& self_world);

/// R_G⁻¹ · R_{f̂→f} · R_G · R₀ with R_{f̂→f} the yaw aligning the XY
/// projections of `self` onto `observed`.
Rot3 correct_rotation(const Rot3& initial, const Rot3& vehicle_rotation,
                      const Vec3& observed, const Vec3& self);

}  // namespace relpose

#endif  // RELPOSE_VP_ROT_HPP
