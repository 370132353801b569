#include "relpose/vanishing_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "relpose/errors.hpp"

namespace relpose {

double axial_angle(const Vec3& a, const Vec3& b) {
  const double t = angle_between(a, b);
  return std::min(t, kPi - t);
}

VanishingMatrix::VanishingMatrix(const Mat3& columns) : m_(columns) {
  for (int i = 0; i < 3; ++i) {
    const double n = m_.col(i).norm();
    if (!std::isfinite(n) || !(n > 0.0)) {
      throw DegenerateGeometry("vanishing direction has zero length");
    }
    m_.col(i) /= n;
  }
  const double min_sep = deg2rad(kMinSeparationDeg);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (axial_angle(m_.col(i), m_.col(j)) <= min_sep) {
        throw DegenerateGeometry("vanishing directions are near-collinear");
      }
    }
  }
  if (std::abs(m_.determinant()) <= kMinAbsDeterminant) {
    throw DegenerateGeometry("vanishing matrix is ill-conditioned");
  }
}

}  // namespace relpose
