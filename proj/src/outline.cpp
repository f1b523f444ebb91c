#include "morphkit/outline.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/errors.hpp"
#include "morphkit/spline.hpp"

namespace morphkit {

Outline make_outline(std::vector<Vec2> points, std::string source_id) {
  // Remove consecutive duplicates and an explicit closing point.
  std::vector<Vec2> clean;
  clean.reserve(points.size());
  for (const Vec2 p : points) {
    if (!clean.empty() && distance(clean.back(), p) < 1e-12) continue;
    clean.push_back(p);
  }
  while (clean.size() > 1 && distance(clean.front(), clean.back()) < 1e-12)
    clean.pop_back();
  if (clean.size() < 3)
    raise(ErrorCode::too_few_points, "outline needs at least 3 distinct points");
  return Outline{std::move(clean), std::move(source_id)};
}

Outline symmetrize_vertical(const Outline& outline) {
  const auto& pts = outline.points;
  const size_t n = pts.size();

  size_t top = 0, bottom = 0;
  for (size_t i = 1; i < n; ++i) {
    if (pts[i].y < pts[top].y) top = i;
    if (pts[i].y > pts[bottom].y) bottom = i;
  }
  if (top == bottom || distance(pts[top], pts[bottom]) < 1e-12)
    raise(ErrorCode::degenerate_split,
          "topmost and bottommost points coincide");

  // The two halves between the split points, both walked top -> bottom.
  auto walk = [&](size_t from, size_t to) {
    std::vector<Vec2> half;
    for (size_t i = from; ; i = (i + 1) % n) {
      half.push_back(pts[i]);
      if (i == to) break;
    }
    return half;
  };
  std::vector<Vec2> forward = walk(top, bottom);
  std::vector<Vec2> backward = walk(bottom, top);
  std::reverse(backward.begin(), backward.end());  // now top -> bottom too

  std::vector<Vec2>& half =
      polyline_length(forward) <= polyline_length(backward) ? forward : backward;

  const double axis_x = 0.5 * (pts[top].x + pts[bottom].x);
  // Snap the split points onto the axis so reflecting the result across the
  // axis reproduces it exactly.
  half.front().x = axis_x;
  half.back().x = axis_x;

  std::vector<Vec2> out = half;
  for (size_t i = half.size() - 1; i-- > 1;)
    out.push_back({2.0 * axis_x - half[i].x, half[i].y});
  return make_outline(std::move(out), outline.source_id + "_sym");
}

ShapeSample resample(const Outline& outline, int n) {
  if (outline.points.size() < 4)
    raise(ErrorCode::too_few_points, "resample needs an outline with >= 4 points");
  if (n < 8) raise(ErrorCode::invalid_argument, "resample needs n >= 8");

  const PeriodicSpline spline(outline.points);
  const double total = spline.total_arc_length();

  ShapeSample sample;
  sample.id = outline.source_id;
  sample.points.resize(n);
  for (int k = 0; k < n; ++k) {
    const double s = total * k / n;
    sample.points[k] = spline.position(spline.param_at_arc_length(s));
  }

  // Canonical counter-clockwise orientation, keeping the first point first.
  if (polygon_signed_area(sample.points) < 0.0)
    std::reverse(sample.points.begin() + 1, sample.points.end());
  return sample;
}

int preset_points(const std::string& dataset) {
  if (dataset == "vases") return 139;
  if (dataset == "shells") return 150;
  if (dataset == "leaves") return 200;
  raise(ErrorCode::invalid_argument,
        "unknown dataset preset '" + dataset + "' (vases, shells, leaves)");
}

}  // namespace morphkit
