#ifndef RELPOSE_VANISHING_MATRIX_HPP
#define RELPOSE_VANISHING_MATRIX_HPP

#include "relpose/geom.hpp"

namespace relpose {

/// Three unit vanishing directions stored as columns, expressed in one
/// camera frame. Directions are axial: v and −v describe the same family of
/// parallel lines.
class VanishingMatrix {
 public:
  // Minimum axial angle between any two columns.
  static constexpr double kMinSeparationDeg = 10.0;
  static constexpr double kMinAbsDeterminant = 0.1;

  /// Normalizes each column, then validates separation and conditioning.
  /// Throws DegenerateGeometry on failure.
  explicit VanishingMatrix(const Mat3& columns);

  const Mat3& matrix() const { return m_; }
  Vec3 column(int i) const { return m_.col(i); }

 private:
  Mat3 m_;
};

/// Angle between two axial directions, in [0, π/2].
double axial_angle(const Vec3& a, const Vec3& b);

}  // namespace relpose

#endif  // RELPOSE_VANISHING_MATRIX_HPP
