#ifndef RELPOSE_DETECTOR_HPP
#define RELPOSE_DETECTOR_HPP

#include "relpose/depth_image.hpp"

namespace relpose {

struct KernelParams {
  double drone_width = 0.5;     // m
  int outer_width = 20;         // px, width of the empty band around the inner square
  double epsilon = 0.1;         // m
  int max_inner = 101;          // px, odd
  // Lenient variant: empty pixels in the inner square cost nothing.
  bool inner_skip_empty = false;

  void validate() const;
};

struct Detection {
  Pixel pixel;
  double depth = 0.0;       // planar depth of the centre pixel
  double dissimilarity = 0.0;
  double inner = 0.0;
  double outer = 0.0;
  Vec3 position = Vec3::Zero();  // vehicle frame
};

/// Expected side length (odd, in pixels) of a drone of the configured width
/// seen at planar depth `depth`, clamped to [1, max_inner].
int inner_size(double depth, const KernelParams& params, const ProjectionParams& proj);

/// Sum of |d(p) − d_c| over the inner square centred on `center`. Empty and
/// out-of-image pixels cost d_c.
double inner_dissimilarity(const DepthImage& image, const Pixel& center,
                           const KernelParams& params, const ProjectionParams& proj);

/// Penalty for occupied pixels in the band around the inner square: 1/ε for
/// depths within ε of d_c, 1/|d(p) − d_c| otherwise, nothing for empty or
/// out-of-image pixels.
double outer_dissimilarity(const DepthImage& image, const Pixel& center,
                           const KernelParams& params, const ProjectionParams& proj);

/// Global argmin of inner + outer dissimilarity over all occupied pixels.
/// Ties go to the smaller inner term, then to the first pixel in row-major
/// order. Throws NoCandidates on an empty image.
Detection detect(const DepthImage& image, const KernelParams& params,
                 const ProjectionParams& proj);

}  // namespace relpose

#endif  // RELPOSE_DETECTOR_HPP
