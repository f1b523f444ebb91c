#include <cmath>
#include <doctest.h>

#include "helpers.hpp"
#include "morphkit/errors.hpp"
#include "morphkit/procrustes.hpp"

using namespace morphkit;
using namespace testutil;

TEST_CASE("procrustes: rotation+scale copies collapse to one pre-shape") {
  SplitMix64 rng(17);
  const auto base = fourier_blob(80, rng);
  const ShapeSample a = make_sample(base, "a");
  const ShapeSample b = make_sample(
      translated(scaled(rotated(base, 37.0 * kPi / 180.0), 5.0), {3.0, -7.0}), "b");
  const auto pre = procrustes_align(std::vector<ShapeSample>{a, b});
  REQUIRE(pre.size() == 2);
  for (size_t i = 0; i < base.size(); ++i) {
    CHECK(std::abs(pre[0].points[i].x - pre[1].points[i].x) < 1e-9);
    CHECK(std::abs(pre[0].points[i].y - pre[1].points[i].y) < 1e-9);
  }
}

TEST_CASE("procrustes: single sample is centered and unit scale, unrotated") {
  const ShapeSample s = make_sample(translated(circle_points(50, 3.0), {2, 2}), "solo");
  const auto pre = procrustes_align(std::vector<ShapeSample>{s});
  const Vec2 m = point_mean(pre[0].points);
  CHECK(std::abs(m.x) < 1e-12);
  CHECK(std::abs(m.y) < 1e-12);
  double ss = 0;
  for (const Vec2 p : pre[0].points) ss += norm_sq(p);
  CHECK(std::sqrt(ss) == doctest::Approx(1.0).epsilon(1e-12));
  // Unrotated: proportional to the centered input.
  const PreShape direct = to_preshape(s);
  for (size_t i = 0; i < direct.points.size(); ++i)
    CHECK(distance(direct.points[i], pre[0].points[i]) < 1e-12);
}

TEST_CASE("procrustes: converged mean beats every rotated mean (1-degree grid)") {
  // Oracle: brute-force rotation sweep.
  SplitMix64 rng(23);
  const auto base = square_points(60, 2.0);
  std::vector<ShapeSample> samples;
  for (int s = 0; s < 10; ++s) {
    auto pts = base;
    for (auto& p : pts)
      p += Vec2{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
    pts = rotated(pts, rng.uniform(0.0, 2.0 * kPi));
    samples.push_back(make_sample(pts, "sq" + std::to_string(s)));
  }
  const auto pre = procrustes_align(samples);

  // Converged mean configuration.
  const size_t n = pre[0].points.size();
  std::vector<Vec2> mean(n);
  for (const auto& p : pre)
    for (size_t i = 0; i < n; ++i) mean[i] += p.points[i];
  double ss = 0;
  for (Vec2& v : mean) {
    v = v / static_cast<double>(pre.size());
  }
  for (const Vec2 v : mean) ss += norm_sq(v);
  for (Vec2& v : mean) v = v / std::sqrt(ss);

  for (const auto& p : pre) {
    double aligned_d2 = 0;
    for (size_t i = 0; i < n; ++i) aligned_d2 += norm_sq(p.points[i] - mean[i]);
    for (int deg = 1; deg < 360; ++deg) {
      const auto rot_mean = rotated(mean, deg * kPi / 180.0);
      double d2 = 0;
      for (size_t i = 0; i < n; ++i) d2 += norm_sq(p.points[i] - rot_mean[i]);
      CHECK(aligned_d2 <= d2 + 1e-9);
    }
  }
}

TEST_CASE("procrustes: idempotent to 1e-9") {
  SplitMix64 rng(29);
  std::vector<ShapeSample> samples;
  for (int s = 0; s < 6; ++s)
    samples.push_back(make_sample(fourier_blob(64, rng), "b" + std::to_string(s)));
  const auto pre1 = procrustes_align(samples);
  std::vector<ShapeSample> again;
  for (const auto& p : pre1) {
    ShapeSample s2;
    s2.points = p.points;
    s2.id = p.provenance;
    again.push_back(std::move(s2));
  }
  const auto pre2 = procrustes_align(again);
  for (size_t s = 0; s < pre1.size(); ++s)
    for (size_t i = 0; i < pre1[s].points.size(); ++i)
      CHECK(distance(pre1[s].points[i], pre2[s].points[i]) < 1e-9);
}

TEST_CASE("procrustes: error paths") {
  const ShapeSample a = circle_sample(32);
  const ShapeSample b = circle_sample(33);
  CHECK_THROWS_AS(procrustes_align(std::vector<ShapeSample>{a, b}), MorphError);

  ShapeSample degenerate;
  degenerate.id = "point";
  degenerate.points.assign(32, Vec2{1.0, 1.0});
  try {
    procrustes_align(std::vector<ShapeSample>{degenerate});
    FAIL("expected DegenerateShape");
  } catch (const MorphError& e) {
    CHECK(e.code() == ErrorCode::degenerate_shape);
  }
}

TEST_CASE("procrustes: reflection excluded by default, available on request") {
  SplitMix64 rng(31);
  const auto base = fourier_blob(48, rng);
  std::vector<Vec2> mirrored(base.size());
  for (size_t i = 0; i < base.size(); ++i) mirrored[i] = {-base[i].x, base[i].y};

  const Mat2 r_proper = optimal_rotation(mirrored, base, false);
  CHECK(det(r_proper) == doctest::Approx(1.0).epsilon(1e-12));
  const Mat2 r_improper = optimal_rotation(mirrored, base, true);
  CHECK(det(r_improper) == doctest::Approx(-1.0).epsilon(1e-12));
  // The improper fit is exact for a mirrored copy.
  double resid = 0;
  for (size_t i = 0; i < base.size(); ++i)
    resid += norm_sq(r_improper * mirrored[i] - base[i]);
  CHECK(resid < 1e-18);
}
