// Independent reference implementations used only by the tests. They share
// types with the library but none of its algorithmic code.
#ifndef RELPOSE_TESTS_ORACLES_HPP
#define RELPOSE_TESTS_ORACLES_HPP

#include <array>
#include <optional>
#include <vector>

#include "relpose/depth_image.hpp"
#include "relpose/detector.hpp"
#include "relpose/geom.hpp"
#include "relpose/vanishing_matrix.hpp"

namespace oracle {

using relpose::Vec3;

struct Candidate {
  int u = 0;
  int v = 0;
  double e = 0.0;
  double ei = 0.0;
  double eo = 0.0;
};

// Kernel side length from the pinhole size model, written out directly.
int kernel_side(double depth, double width, int n, double half_fov, int max_inner);

// Evaluates the kernel cost at every occupied pixel and keeps the minimum.
// Offsets of both regions are enumerated explicitly in row-major order.
std::optional<Candidate> brute_force_detect(const relpose::DepthImage& image,
                                            const relpose::KernelParams& kernel,
                                            const relpose::ProjectionParams& proj);

// Gaussian-weighted mean iterated `iterations` times over the points within
// `radius` of the seed (fixed support). Scalar arithmetic per coordinate.
std::optional<Vec3> iterated_weighted_mean(const std::vector<Vec3>& points, const Vec3& seed,
                                           double radius, double bandwidth, int iterations);

struct Assignment {
  std::array<int, 3> drone_index{};
  std::array<double, 3> sign{};
  std::array<double, 3> residual{};
  double total = 0.0;
};

enum class Objective {
  kMinSum,          // smallest total residual
  kLexAscending,    // smallest residual first, then the next, ...
};

// All 3!·2³ signed permutations, unordered.
std::vector<Assignment> all_assignments(const relpose::VanishingMatrix& vehicle,
                                        const relpose::VanishingMatrix& drone,
                                        const relpose::Rot3& prior);

// Best signed permutation under `objective` (first found on exact ties).
Assignment exhaustive_match(const relpose::VanishingMatrix& vehicle,
                            const relpose::VanishingMatrix& drone, const relpose::Rot3& prior,
                            Objective objective);

}  // namespace oracle

#endif  // RELPOSE_TESTS_ORACLES_HPP
