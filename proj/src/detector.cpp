#include "relpose/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relpose/errors.hpp"

namespace relpose {

void KernelParams::validate() const {
  if (!(drone_width > 0.0)) throw std::invalid_argument("kernel drone width must be > 0");
  if (outer_width < 1) throw std::invalid_argument("kernel outer width must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("kernel epsilon must be > 0");
  if (max_inner < 1 || max_inner % 2 == 0) {
    throw std::invalid_argument("kernel max inner size must be odd and >= 1");
  }
}

int inner_size(double depth, const KernelParams& params, const ProjectionParams& proj) {
  if (!(depth > 0.0)) throw std::invalid_argument("inner_size: depth must be > 0");
  const double expected = params.drone_width * proj.focal() / depth;
  const double half = std::floor(expected / 2.0);
  // Compare in floating point first so huge values never overflow int.
  if (2.0 * half + 1.0 >= params.max_inner) return params.max_inner;
  return 2 * static_cast<int>(half) + 1;
}

namespace {

double center_depth(const DepthImage& image, const Pixel& c) {
  const double dc = image.value_or_empty(c.u, c.v);
  if (!(dc > 0.0)) throw NoCandidates("not a candidate");
  return dc;
}

}  // namespace

double inner_dissimilarity(const DepthImage& image, const Pixel& center,
                           const KernelParams& params, const ProjectionParams& proj) {
  const double dc = center_depth(image, center);
  const int half = inner_size(dc, params, proj) / 2;
  double sum = 0.0;
  for (int v = center.v - half; v <= center.v + half; ++v) {
    for (int u = center.u - half; u <= center.u + half; ++u) {
      const double d = image.value_or_empty(u, v);
      if (d == 0.0 && params.inner_skip_empty) continue;
      sum += std::abs(d - dc);
    }
  }
  return sum;
}

double outer_dissimilarity(const DepthImage& image, const Pixel& center,
                           const KernelParams& params, const ProjectionParams& proj) {
  const double dc = center_depth(image, center);
  const int half = inner_size(dc, params, proj) / 2;
  const int reach = half + params.outer_width;
  const double similar = 1.0 / params.epsilon;
  double sum = 0.0;
  for (int v = center.v - reach; v <= center.v + reach; ++v) {
    const bool inner_row = std::abs(v - center.v) <= half;
    for (int u = center.u - reach; u <= center.u + reach; ++u) {
      if (inner_row && std::abs(u - center.u) <= half) continue;
      const double d = image.value_or_empty(u, v);
      if (d == 0.0) continue;
      const double diff = std::abs(d - dc);
      sum += diff <= params.epsilon ? similar : 1.0 / diff;
    }
  }
  return sum;
}

Detection detect(const DepthImage& image, const KernelParams& params,
                 const ProjectionParams& proj) {
  params.validate();
  bool found = false;
  Detection best;
  const int n = image.size();
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      if (image.at(u, v) == 0.0) continue;
      const Pixel p{u, v};
      const double ei = inner_dissimilarity(image, p, params, proj);
      const double eo = outer_dissimilarity(image, p, params, proj);
      const double e = ei + eo;
      if (!found || e < best.dissimilarity || (e == best.dissimilarity && ei < best.inner)) {
        found = true;
        best.pixel = p;
        best.depth = image.at(u, v);
        best.dissimilarity = e;
        best.inner = ei;
        best.outer = eo;
      }
    }
  }
  if (!found) throw NoCandidates("no candidates");
  best.position = unproject(best.pixel, best.depth, proj);
  return best;
}

}  // namespace relpose
