#include "relpose/vp_rot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "relpose/errors.hpp"

namespace relpose {

VanishingMatrix complete_vd(const Vec3& v1, const Vec3& v2) {
  if (axial_angle(v1, v2) <= deg2rad(VanishingMatrix::kMinSeparationDeg)) {
    throw DegenerateGeometry("vanishing directions are near-collinear");
  }
  const Vec3 a = v1.normalized();
  const Vec3 b = v2.normalized();
  Mat3 m;
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = a.cross(b).normalized();
  return VanishingMatrix(m);
}

Mat3 MatchResult::aligned(const VanishingMatrix& drone) const {
  Mat3 out;
  for (int g = 0; g < 3; ++g) out.col(g) = sign[g] * drone.column(drone_index[g]);
  return out;
}

std::array<int, 3> MatchResult::by_residual() const {
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [this](int a, int b) { return residual[a] < residual[b]; });
  return order;
}

MatchResult match_vds(const VanishingMatrix& vehicle, const VanishingMatrix& drone,
                      const Rot3& prior, double max_residual) {
  struct Candidate {
    double residual;
    int g;
    int d;
    double sign;
  };
  std::array<Candidate, 9> candidates;
  for (int g = 0; g < 3; ++g) {
    for (int d = 0; d < 3; ++d) {
      const Vec3 moved = prior * drone.column(d);
      const double sign = vehicle.column(g).dot(moved) >= 0.0 ? 1.0 : -1.0;
      candidates[g * 3 + d] = {angle_between(vehicle.column(g), sign * moved), g, d, sign};
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.residual < b.residual; });

  MatchResult out;
  std::array<bool, 3> g_used{}, d_used{};
  for (const auto& c : candidates) {
    if (g_used[c.g] || d_used[c.d]) continue;
    g_used[c.g] = d_used[c.d] = true;
    out.drone_index[c.g] = c.d;
    out.sign[c.g] = c.sign;
    out.residual[c.g] = c.residual;
  }
  for (double r : out.residual) {
    if (r > max_residual) throw AmbiguousCorrespondence("ambiguous correspondence");
  }
  return out;
}

Rot3 estimate_rotation(const VanishingMatrix& vehicle, const VanishingMatrix& drone,
                       const MatchResult& match, RotationPolicy policy) {
  const Mat3 aligned = match.aligned(drone);
  Mat3 vg, vd;
  if (policy == RotationPolicy::kAllThree) {
    vg = vehicle.matrix();
    vd = aligned;
  } else {
    const auto order = match.by_residual();
    const Vec3 g1 = vehicle.column(order[0]), g2 = vehicle.column(order[1]);
    const Vec3 d1 = aligned.col(order[0]), d2 = aligned.col(order[1]);
    vg << g1, g2, g1.cross(g2).normalized();
    vd << d1, d2, d1.cross(d2).normalized();
  }
  if (!(std::abs(vd.determinant()) > 1e-9) || !vd.allFinite()) {
    throw DegenerateGeometry("singular drone vanishing matrix");
  }
  return Rot3::nearest(vg * vd.inverse());
}

RotationFilterState filter_rotation(const RotationFilterState& state, const Rot3& measured,
                                    double t) {
  if (!state.initialized) return reset_rotation(state, measured, t);
  if (!(t > state.last_time)) {
    throw std::invalid_argument("filter_rotation: time must increase");
  }
  RotationFilterState next = state;
  next.rotation = step_toward(state.rotation, measured, state.max_rate * (t - state.last_time))
                      .orthonormalized();
  next.last_time = t;
  return next;
}

RotationFilterState reset_rotation(const RotationFilterState& state, const Rot3& r, double t) {
  RotationFilterState next = state;
  next.rotation = r.orthonormalized();
  next.last_time = t;
  next.initialized = true;
  return next;
}

void MotionParams::validate() const {
  if (window < 1) throw std::invalid_argument("motion window must be >= 1");
  if (!(cone > 0.0)) throw std::invalid_argument("motion cone must be > 0");
  if (gap < 1) throw std::invalid_argument("motion frame gap must be >= 1");
  if (!(min_distance > 0.0)) throw std::invalid_argument("motion distance threshold must be > 0");
}

MotionAccumulator::MotionAccumulator(MotionParams params) : params_(params) {
  params_.validate();
}

std::optional<MotionPair> MotionAccumulator::push(const Vec3& observed, const Vec3& self) {
  if (!(observed.norm() >= params_.min_distance) || !(self.norm() > 0.0)) {
    buffer_.clear();
    return std::nullopt;
  }
  buffer_.push_back({observed, self});
  while (buffer_.size() > static_cast<std::size_t>(params_.window)) buffer_.pop_front();
  if (buffer_.size() < static_cast<std::size_t>(params_.window)) return std::nullopt;

  for (std::size_t a = 0; a < buffer_.size(); ++a) {
    for (std::size_t b = a + 1; b < buffer_.size(); ++b) {
      if (angle_between(buffer_[a].observed, buffer_[b].observed) > params_.cone) {
        return std::nullopt;
      }
    }
  }
  MotionPair sum;
  for (const auto& m : buffer_) {
    sum.observed += m.observed;
    sum.self += m.self;
  }
  return sum;
}

Vec3 self_motion_world(const Rot3& vehicle_rotation, const Rot3& grd_rotation,
                       const Vec3& self_direction) {
  return vehicle_rotation * (grd_rotation * self_direction);
}

std::optional<MotionPair> accumulate_motion(MotionAccumulator& acc,
                                            std::span<const Vec3> drone_world,
                                            std::size_t k, const Vec3& self_world) {
  const auto gap = static_cast<std::size_t>(acc.params().gap);
  if (k >= drone_world.size() || k < gap) return std::nullopt;
  return acc.push(drone_world[k] - drone_world[k - gap], self_world);
}

Rot3 correct_rotation(const Rot3& initial, const Rot3& vehicle_rotation, const Vec3& observed,
                      const Vec3& self) {
  const Rot3 fix = rotation_aligning_xy(self, observed);
  return (vehicle_rotation.inverse() * fix * vehicle_rotation * initial).orthonormalized();
}

}  // namespace relpose
