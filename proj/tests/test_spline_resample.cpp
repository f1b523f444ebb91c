#include <cmath>
#include <doctest.h>

#include "helpers.hpp"
#include "morphkit/errors.hpp"
#include "morphkit/outline.hpp"
#include "morphkit/spline.hpp"

using namespace morphkit;
using namespace testutil;

TEST_CASE("resample: unit circle from 360 points to 100") {
  const Outline o = make_outline(circle_points(360), "circle360");
  const ShapeSample s = resample(o, 100);
  REQUIRE(s.n() == 100);
  for (const Vec2 p : s.points)
    CHECK(std::abs(norm(p) - 1.0) < 1e-4);
  const double want_gap = 2.0 * kPi / 100.0;
  for (int i = 0; i < 100; ++i) {
    const double gap = distance(s.points[i], s.points[(i + 1) % 100]);
    CHECK(std::abs(gap - want_gap) < 1e-3);
  }
}

TEST_CASE("resample: fixed point when n matches an equally spaced input") {
  const Outline o = make_outline(circle_points(360), "circle");
  const ShapeSample s = resample(o, 360);
  for (int i = 0; i < 360; ++i)
    CHECK(distance(s.points[i], o.points[i]) < 1e-6);
}

TEST_CASE("resample: equal arc-length gaps within 0.5%") {
  // Smooth but non-circular outline.
  const Outline o = make_outline(ellipse_points(240, 2.0, 1.0), "ellipse");
  const ShapeSample s = resample(o, 150);
  const PeriodicSpline check(s.points);
  // Chord gaps of a smooth equal-arc sampling agree with L/n to well inside
  // the gap tolerance at this density.
  const double total = polygon_perimeter(s.points);
  const double want = total / 150.0;
  for (int i = 0; i < s.n(); ++i) {
    const double gap = distance(s.points[i], s.points[(i + 1) % s.n()]);
    CHECK(std::abs(gap - want) / want < 0.005);
  }
}

TEST_CASE("resample: enforces counter-clockwise orientation") {
  auto cw = circle_points(120);
  std::reverse(cw.begin(), cw.end());
  const ShapeSample s = resample(make_outline(cw, "cw_circle"), 64);
  CHECK(polygon_signed_area(s.points) > 0.0);
  // First point stays first.
  CHECK(distance(s.points[0], cw[0]) < 1e-9);
}

TEST_CASE("resample: rejects degenerate inputs") {
  CHECK_THROWS_AS(make_outline({{0, 0}, {1, 0}}, "segment"), MorphError);
  const Outline tri = make_outline({{0, 0}, {1, 0}, {0, 1}}, "tri");
  try {
    resample(tri, 32);
    FAIL("expected TooFewPoints");
  } catch (const MorphError& e) {
    CHECK(e.code() == ErrorCode::too_few_points);
  }
  const Outline o = make_outline(circle_points(16), "c");
  CHECK_THROWS_AS(resample(o, 4), MorphError);
}

TEST_CASE("resample: dataset presets") {
  CHECK(preset_points("vases") == 139);
  CHECK(preset_points("shells") == 150);
  CHECK(preset_points("leaves") == 200);
  CHECK_THROWS_AS(preset_points("pots"), MorphError);
}

TEST_CASE("spline: arc length of a circle") {
  const PeriodicSpline sp(circle_points(64, 2.0));
  CHECK(sp.total_arc_length() == doctest::Approx(4.0 * kPi).epsilon(1e-4));
  // Inverting arc length lands on the curve.
  const double t = sp.param_at_arc_length(sp.total_arc_length() / 4.0);
  const Vec2 p = sp.position(t);
  CHECK(norm(p) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("spline: interpolates its control points") {
  SplitMix64 rng(3);
  const auto pts = fourier_blob(40, rng);
  const PeriodicSpline sp(pts);
  // Control point i sits at the cumulative chord-length parameter.
  double t = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec2 p = sp.position(t);
    CHECK(distance(p, pts[i]) < 1e-10);
    t += distance(pts[i], pts[(i + 1) % pts.size()]);
  }
}
