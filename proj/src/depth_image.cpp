#include "relpose/depth_image.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "relpose/errors.hpp"
#include "relpose/scan_sim.hpp"

namespace relpose {

double ProjectionParams::focal() const { return (n / 2.0) / std::tan(half_fov); }

void ProjectionParams::validate() const {
  if (n < 64 || n % 2 != 0) throw std::invalid_argument("projection N must be even and >= 64");
  if (!(half_fov > 0.0) || !(half_fov < kPi / 2.0)) {
    throw std::invalid_argument("projection half FOV must be in (0, 90) deg");
  }
  if (!(std::abs(view_dir.norm() - 1.0) < 1e-9)) {
    throw std::invalid_argument("projection view direction must be a unit vector");
  }
}

Mat3 ProjectionParams::camera_basis() const {
  const Vec3 z = view_dir.normalized();
  // Image x follows vehicle +X projected off the viewing axis; fall back to
  // +Y when looking along X.
  Vec3 x = Vec3::UnitX() - Vec3::UnitX().dot(z) * z;
  if (x.norm() < 1e-6) x = Vec3::UnitY() - Vec3::UnitY().dot(z) * z;
  x.normalize();
  const Vec3 y = z.cross(x);
  Mat3 basis;
  basis.row(0) = x.transpose();
  basis.row(1) = y.transpose();
  basis.row(2) = z.transpose();
  return basis;
}

std::size_t DepthImage::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [](double d) { return d != 0.0; }));
}

namespace {

std::optional<Projected> project_with(const Vec3& p, const Mat3& basis, double f, int n) {
  const Vec3 c = basis * p;
  if (!(c.z() > 0.0)) return std::nullopt;
  const double u = n / 2.0 + f * c.x() / c.z();
  const double v = n / 2.0 + f * c.y() / c.z();
  if (!(u >= 0.0) || !(v >= 0.0) || !(u < n) || !(v < n)) return std::nullopt;
  return Projected{{static_cast<int>(std::floor(u)), static_cast<int>(std::floor(v))}, c.z()};
}

}  // namespace

std::optional<Projected> project_point(const Vec3& p, const ProjectionParams& params) {
  return project_with(p, params.camera_basis(), params.focal(), params.n);
}

DepthImage project(std::span<const Vec3> points, const ProjectionParams& params) {
  params.validate();
  const Mat3 basis = params.camera_basis();
  const double f = params.focal();
  DepthImage image(params.n);
  for (const Vec3& p : points) {
    const auto hit = project_with(p, basis, f, params.n);
    if (!hit) continue;
    double& cell = image.at(hit->pixel.u, hit->pixel.v);
    if (cell == 0.0 || hit->depth < cell) cell = hit->depth;
  }
  return image;
}

DepthImage project(const ScanFrame& frame, const ProjectionParams& params) {
  const std::vector<Vec3> pts = frame.positions();
  return project(pts, params);
}

Vec3 unproject(const Pixel& p, double depth, const ProjectionParams& params) {
  if (!(depth > 0.0)) throw std::invalid_argument("unproject: depth must be > 0");
  if (p.u < 0 || p.v < 0 || p.u >= params.n || p.v >= params.n) {
    throw std::invalid_argument("unproject: pixel outside image");
  }
  const double f = params.focal();
  const double x = (p.u + 0.5 - params.n / 2.0) / f * depth;
  const double y = (p.v + 0.5 - params.n / 2.0) / f * depth;
  return params.camera_basis().transpose() * Vec3(x, y, depth);
}

void write_pgm(std::ostream& os, const DepthImage& image) {
  const int n = image.size();
  std::vector<long long> mm(image.data().size());
  long long maxval = 1;
  for (std::size_t i = 0; i < mm.size(); ++i) {
    mm[i] = std::llround(image.data()[i] * 1000.0);
    maxval = std::max(maxval, mm[i]);
  }
  os << "P2\n" << n << ' ' << n << '\n' << maxval << '\n';
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      if (u) os << ' ';
      os << mm[static_cast<std::size_t>(v) * n + u];
    }
    os << '\n';
  }
}

DepthImage read_pgm(std::istream& is) {
  std::string magic;
  int w = 0, h = 0;
  long long maxval = 0;
  if (!(is >> magic >> w >> h >> maxval) || magic != "P2" || w != h || w <= 0) {
    throw std::runtime_error("read_pgm: bad header");
  }
  DepthImage image(w);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      long long mm = 0;
      if (!(is >> mm)) throw std::runtime_error("read_pgm: truncated data");
      image.at(u, v) = static_cast<double>(mm) / 1000.0;
    }
  }
  return image;
}

}  // namespace relpose
