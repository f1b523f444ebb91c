#include <cmath>
#include <doctest.h>

#include "helpers.hpp"
#include "morphkit/errors.hpp"
#include "morphkit/lddmm.hpp"
#include "morphkit/procrustes.hpp"

using namespace morphkit;
using namespace testutil;

TEST_CASE("lddmm: matching a shape to itself stays at rest") {
  const ShapeSample a = circle_sample(40);
  LddmmConfig cfg;
  cfg.timesteps = 10;
  const MatchResult r = lddmm_match(a, a, cfg);
  CHECK(r.converged);
  CHECK(r.distance < 1e-6);
  CHECK(r.residual < 1e-9);
}

TEST_CASE("lddmm: adjoint gradient matches central finite differences") {
  // N = 20 points, T = 5 steps, random momenta; relative error < 1e-4.
  const int n = 20, steps = 5;
  SplitMix64 rng(401);
  const ShapeSample src = make_sample(circle_points(n), "src");
  const ShapeSample dst = make_sample(ellipse_points(n, 1.3, 0.8), "dst");
  LddmmConfig cfg;
  cfg.timesteps = steps;
  cfg.kernel_width = 0.5;
  cfg.lambda = 5.0;

  std::vector<double> p(static_cast<size_t>(steps) * 2 * n);
  for (double& v : p) v = rng.uniform(-0.3, 0.3);

  const std::vector<double> grad = lddmm_gradient(src, dst, cfg, p);
  const double h = 1e-6;
  double worst = 0.0;
  for (size_t i = 0; i < p.size(); i += 7) {  // probe a spread of coordinates
    auto pp = p;
    pp[i] += h;
    const double ep = lddmm_energy(src, dst, cfg, pp);
    pp[i] -= 2 * h;
    const double em = lddmm_energy(src, dst, cfg, pp);
    const double fd = (ep - em) / (2 * h);
    const double scale = std::max({1.0, std::abs(fd), std::abs(grad[i])});
    worst = std::max(worst, std::abs(fd - grad[i]) / scale);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("lddmm: energy decreases monotonically over accepted steps") {
  const ShapeSample a = circle_sample(30);
  const ShapeSample b = make_sample(ellipse_points(30, 1.35, 0.75), "e");
  LddmmConfig cfg;
  cfg.timesteps = 8;
  cfg.max_iters = 60;
  const MatchResult r = lddmm_match(a, b, cfg);
  REQUIRE(r.energy_history.size() >= 2);
  for (size_t i = 1; i < r.energy_history.size(); ++i)
    CHECK(r.energy_history[i] <= r.energy_history[i - 1] + 1e-12);
}

TEST_CASE("lddmm: circle to scaled circle cuts the residual by > 90%") {
  const ShapeSample a = circle_sample(36);
  const ShapeSample b = circle_sample(36, 1.3);
  LddmmConfig cfg;
  cfg.lambda = 10.0;
  cfg.kernel_width = 0.5;
  cfg.timesteps = 10;
  cfg.max_iters = 150;
  const MatchResult r = lddmm_match(a, b, cfg);

  // Baseline: zero momenta leave the source untouched.
  double base_sq = 0;
  for (int i = 0; i < a.n(); ++i) base_sq += norm_sq(a.points[i] - b.points[i]);
  CHECK(r.residual < 0.1 * std::sqrt(base_sq));
  CHECK(r.distance > 0.0);
}

TEST_CASE("lddmm: kinetic term is invariant under joint rotation") {
  const int n = 24, steps = 6;
  SplitMix64 rng(409);
  const auto base = ellipse_points(n, 1.2, 0.9);
  std::vector<double> p(static_cast<size_t>(steps) * 2 * n);
  for (double& v : p) v = rng.uniform(-0.2, 0.2);

  LddmmConfig cfg;
  cfg.timesteps = steps;
  cfg.lambda = 1.0;

  const double theta = 0.83;
  const Mat2 rot = Mat2::rotation(theta);
  std::vector<double> p_rot(p.size());
  for (int t = 0; t < steps; ++t)
    for (int i = 0; i < n; ++i) {
      const Vec2 v{p[static_cast<size_t>(t) * 2 * n + i],
                   p[static_cast<size_t>(t) * 2 * n + n + i]};
      const Vec2 w = rot * v;
      p_rot[static_cast<size_t>(t) * 2 * n + i] = w.x;
      p_rot[static_cast<size_t>(t) * 2 * n + n + i] = w.y;
    }

  const ShapeSample src = make_sample(base, "s");
  const ShapeSample dst = make_sample(scaled(base, 1.2), "d");
  const ShapeSample src_r = make_sample(rotated(base, theta), "sr");
  const ShapeSample dst_r = make_sample(rotated(scaled(base, 1.2), theta), "dr");

  const double e = lddmm_energy(src, dst, cfg, p);
  const double er = lddmm_energy(src_r, dst_r, cfg, p_rot);
  CHECK(std::abs(e - er) < 1e-8 * std::max(1.0, std::abs(e)));
}

TEST_CASE("lddmm: perturbation size orders the distances") {
  // b is a small deformation of a; c a large one. d(a,b) < d(a,c).
  const int n = 32;
  auto bumpy = [&](double amp) {
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      const double r = 1.0 + amp * std::cos(3 * t);
      pts[i] = {r * std::cos(t), r * std::sin(t)};
    }
    return pts;
  };
  std::vector<ShapeSample> shapes = {make_sample(bumpy(0.0), "a"),
                                     make_sample(bumpy(0.05), "b"),
                                     make_sample(bumpy(0.25), "c")};
  const auto pre = procrustes_align(shapes);
  LddmmConfig cfg;
  cfg.timesteps = 8;
  cfg.max_iters = 80;
  cfg.kernel_width = 0.3;
  const DistanceMatrix dm = lddmm_distances(pre, cfg);
  CHECK(dm.at(0, 1) < dm.at(0, 2));
  CHECK(dm.at(0, 0) == 0.0);
  // Symmetric by construction.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(dm.at(i, j) == dm.at(j, i));
}

TEST_CASE("lddmm: config and size validation") {
  const ShapeSample a = circle_sample(16);
  const ShapeSample b = circle_sample(17);
  CHECK_THROWS_AS(lddmm_match(a, b, LddmmConfig{}), MorphError);
  LddmmConfig bad;
  bad.kernel_width = -1.0;
  CHECK_THROWS_AS(lddmm_match(a, a, bad), MorphError);
}

TEST_CASE("lddmm: large lambda drives the residual down, distance stabilizes") {
  // Easy pair: circle to a 1.15x circle; heavy data weight.
  const ShapeSample a = circle_sample(28);
  const ShapeSample b = circle_sample(28, 1.15);
  LddmmConfig cfg;
  cfg.lambda = 1000.0;
  cfg.kernel_width = 0.6;
  cfg.timesteps = 10;
  cfg.max_iters = 400;
  cfg.grad_tol = 1e-8;
  const MatchResult r = lddmm_match(a, b, cfg);
  CHECK(r.residual < 1e-3);
  REQUIRE(r.distance_history.size() >= 11);
  const double final_d = r.distance_history.back();
  for (size_t i = r.distance_history.size() - 10; i < r.distance_history.size(); ++i)
    CHECK(std::abs(r.distance_history[i] - final_d) <= 0.05 * final_d);
}
