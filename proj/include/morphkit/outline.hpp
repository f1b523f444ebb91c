#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morphkit/geometry.hpp"

namespace morphkit {

// Raw closed polyline, e.g. as traced from an image. Closure is implicit:
// the first point is never duplicated at the end.
struct Outline {
  std::vector<Vec2> points;
  std::string source_id;
};

// Validates and normalizes: >= 3 points, no consecutive duplicates, implicit
// closure (a duplicated closing point is dropped).
Outline make_outline(std::vector<Vec2> points, std::string source_id);

// N points equally spaced in arc length along a closed curve, counter-
// clockwise. The universal exchange type between modules.
struct ShapeSample {
  std::vector<Vec2> points;
  std::string id;
  std::optional<std::string> label;

  int n() const { return static_cast<int>(points.size()); }
};

// Translation- and scale-free configuration: centroid at the origin,
// centroid size (root-sum-of-squares of coordinates) equal to 1.
struct PreShape {
  std::vector<Vec2> points;
  std::string provenance;

  int n() const { return static_cast<int>(points.size()); }
};

// Rebuilds the outline as the mirror image of its shorter half. The outline
// is split at its topmost and bottommost points; the shorter half (by arc
// length) is kept and reflected across the vertical axis through the mean x
// of the two split points. Split points are snapped onto the axis, so the
// result is exactly mirror-symmetric.
Outline symmetrize_vertical(const Outline& outline);

// Fits a closed cubic spline (chord-length parameterization) through the
// outline and samples n points at equal arc-length increments starting from
// the outline's first point. Output orientation is counter-clockwise.
ShapeSample resample(const Outline& outline, int n);

// Dataset presets for the resampling density.
int preset_points(const std::string& dataset);  // vases 139, shells 150, leaves 200

}  // namespace morphkit
