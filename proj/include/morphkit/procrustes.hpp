#pragma once

#include <span>
#include <vector>

#include "morphkit/outline.hpp"

namespace morphkit {

struct GpaOptions {
  double tol = 1e-10;
  int max_iter = 100;
  bool allow_reflection = false;
};

// Center at the origin and scale to unit centroid size.
PreShape to_preshape(const ShapeSample& sample);

// Rotation R (det +1) minimizing sum |R*src_i - dst_i|^2 over point pairs.
// With allow_reflection the improper solution is taken when it fits better.
Mat2 optimal_rotation(std::span<const Vec2> src, std::span<const Vec2> dst,
                      bool allow_reflection = false);

// Generalized Procrustes alignment: center/scale each configuration, then
// iteratively rotate all of them to the evolving mean until the mean moves
// less than tol. The mean is initialized from the first sample; output order
// matches input order.
std::vector<PreShape> procrustes_align(std::span<const ShapeSample> samples,
                                       const GpaOptions& opts = {});

// Full Procrustes distance between two pre-shapes (rotation-minimized
// Euclidean distance).
double procrustes_distance(const PreShape& a, const PreShape& b);

}  // namespace morphkit
