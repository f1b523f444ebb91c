#include <algorithm>
#include <cmath>
#include <doctest.h>

#include "helpers.hpp"
#include "morphkit/errors.hpp"
#include "morphkit/outline.hpp"

using namespace morphkit;
using namespace testutil;

namespace {

// Reflect a point set across the vertical axis through x0.
std::vector<Vec2> reflected(const std::vector<Vec2>& pts, double x0) {
  std::vector<Vec2> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i)
    out[i] = {2.0 * x0 - pts[i].x, pts[i].y};
  return out;
}

double axis_x_of(const Outline& o) {
  size_t top = 0, bottom = 0;
  for (size_t i = 1; i < o.points.size(); ++i) {
    if (o.points[i].y < o.points[top].y) top = i;
    if (o.points[i].y > o.points[bottom].y) bottom = i;
  }
  return 0.5 * (o.points[top].x + o.points[bottom].x);
}

}  // namespace

TEST_CASE("symmetrize: a mirror-symmetric outline is a fixed point") {
  // Ellipse sampled so that the top and bottom points are exact samples and
  // the sampling is mirror-symmetric about x = 0.
  std::vector<Vec2> pts;
  const int n = 64;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * (i + 0.0) / n + kPi / 2.0;  // start at the top
    pts.push_back({0.8 * std::cos(t), 1.4 * std::sin(t)});
  }
  const Outline o = make_outline(pts, "sym_ellipse");
  const Outline s = symmetrize_vertical(o);
  CHECK(hausdorff(s.points, o.points) < 1e-6);
}

TEST_CASE("symmetrize: result is exactly mirror-symmetric") {
  // A vase-ish outline with a one-sided spout: ellipse plus a bump on the
  // right side.
  std::vector<Vec2> pts;
  const int n = 160;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n + kPi / 2.0;
    double r = 1.0;
    const double angle = std::atan2(std::sin(t), std::cos(t));
    if (angle > -0.6 && angle < 0.6) r += 0.35 * std::cos(angle / 0.6 * kPi / 2.0);
    pts.push_back({r * std::cos(t), 1.6 * std::sin(t)});
  }
  const Outline o = make_outline(pts, "spouted");
  const Outline s = symmetrize_vertical(o);
  const double x0 = axis_x_of(s);
  CHECK(hausdorff(s.points, reflected(s.points, x0)) < 1e-9);
}

TEST_CASE("symmetrize: keeps the shorter half (arc-length oracle)") {
  // Left half: clean half-circle. Right half: a long, wiggly detour.
  std::vector<Vec2> pts;
  const int half = 60;
  for (int i = 0; i <= half; ++i) {  // left half from top (0,1) to bottom (0,-1)
    const double t = kPi / 2.0 + kPi * i / half;
    pts.push_back({std::cos(t), std::sin(t)});
  }
  for (int i = 1; i < half; ++i) {  // noisy right half, bottom back to top
    const double f = static_cast<double>(i) / half;
    const double y = -1.0 + 2.0 * f;
    const double x = 1.3 + 0.4 * std::sin(14.0 * f * kPi);  // much longer
    pts.push_back({x, y});
  }
  const Outline o = make_outline(pts, "lopsided");

  // Oracle: compare the two halves' arc lengths directly.
  std::vector<Vec2> left(pts.begin(), pts.begin() + half + 1);
  std::vector<Vec2> right(pts.begin() + half, pts.end());
  right.push_back(pts.front());
  REQUIRE(polyline_length(left) < polyline_length(right));

  const Outline s = symmetrize_vertical(o);
  // Result must be the doubled left half: every output point's |x| stays
  // within the half-circle radius, nowhere near the x=1.3 detour.
  for (const Vec2 p : s.points) CHECK(std::abs(p.x) < 1.05);
  // And the left half survives as-is (minus axis snapping of endpoints).
  const double x0 = axis_x_of(s);
  CHECK(hausdorff(s.points, reflected(s.points, x0)) < 1e-9);
}

TEST_CASE("symmetrize: coincident split points are rejected") {
  // All points share one y: top and bottom coincide.
  std::vector<Vec2> flat;
  for (int i = 0; i < 10; ++i) flat.push_back({static_cast<double>(i), 0.0});
  try {
    symmetrize_vertical(make_outline(flat, "flat"));
    FAIL("expected DegenerateSplit");
  } catch (const MorphError& e) {
    CHECK(e.code() == ErrorCode::degenerate_split);
  }
}
