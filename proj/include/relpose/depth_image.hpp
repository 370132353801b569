#ifndef RELPOSE_DEPTH_IMAGE_HPP
#define RELPOSE_DEPTH_IMAGE_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "relpose/geom.hpp"

namespace relpose {

struct ScanFrame;

/// Pinhole projection onto an N×N depth image looking along `view_dir`.
/// The principal point sits at (N/2, N/2) in continuous coordinates and pixel
/// (u, v) covers [u, u+1) × [v, v+1), so pixel centres are at +0.5.
struct ProjectionParams {
  int n = 512;
  double half_fov = deg2rad(60.0);
  Vec3 view_dir = Vec3::UnitZ();

  double focal() const;
  void validate() const;
  /// Rows are the camera x, y, z axes expressed in the vehicle frame.
  Mat3 camera_basis() const;
};

struct Pixel {
  int u = 0;  // column
  int v = 0;  // row

  bool operator==(const Pixel&) const = default;
};

/// Row-major N×N grid of planar depths (m). Zero means no return.
class DepthImage {
 public:
  DepthImage() = default;
  explicit DepthImage(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  bool contains(int u, int v) const { return u >= 0 && v >= 0 && u < n_ && v < n_; }
  double at(int u, int v) const { return data_[index(u, v)]; }
  double& at(int u, int v) { return data_[index(u, v)]; }
  /// Depth, or 0 for out-of-image coordinates.
  double value_or_empty(int u, int v) const { return contains(u, v) ? at(u, v) : 0.0; }

  std::size_t nonzero_count() const;
  std::span<const double> data() const { return data_; }

 private:
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(u);
  }
  int n_ = 0;
  std::vector<double> data_;
};

struct Projected {
  Pixel pixel;
  double depth = 0.0;
};

/// Pixel and planar depth of a vehicle-frame point, if it lands in the image.
std::optional<Projected> project_point(const Vec3& p, const ProjectionParams& params);

/// Bins every point into the image keeping the smallest non-zero depth.
DepthImage project(std::span<const Vec3> points, const ProjectionParams& params);
DepthImage project(const ScanFrame& frame, const ProjectionParams& params);

/// Vehicle-frame point at the centre of `p` with planar depth `depth`.
Vec3 unproject(const Pixel& p, double depth, const ProjectionParams& params);

/// ASCII PGM (P2) with depth in millimetres, 0 = empty. The maxval field is
/// the largest value present (at least 1) and may exceed 65535.
void write_pgm(std::ostream& os, const DepthImage& image);
DepthImage read_pgm(std::istream& is);

}  // namespace relpose

#endif  // RELPOSE_DEPTH_IMAGE_HPP
