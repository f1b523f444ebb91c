#include <cmath>
#include <doctest.h>

#include "helpers.hpp"
#include "morphkit/geometry.hpp"
#include "morphkit/linalg.hpp"
#include "morphkit/rng.hpp"

using namespace morphkit;
using namespace testutil;

TEST_CASE("geometry: polygon area and perimeter on known shapes") {
  const auto sq = square_points(400, 2.0);
  CHECK(polygon_signed_area(sq) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(polygon_perimeter(sq) == doctest::Approx(8.0).epsilon(1e-9));

  const auto circ = circle_points(2000, 3.0);
  CHECK(polygon_signed_area(circ) == doctest::Approx(kPi * 9.0).epsilon(1e-4));

  // Clockwise traversal flips the sign.
  std::vector<Vec2> cw(sq.rbegin(), sq.rend());
  CHECK(polygon_signed_area(cw) == doctest::Approx(-4.0).epsilon(1e-9));
}

TEST_CASE("geometry: centroid size and point mean") {
  auto pts = circle_points(100, 2.0, {5.0, -3.0});
  const Vec2 m = point_mean(pts);
  CHECK(m.x == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(m.y == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(centroid_size(pts) == doctest::Approx(2.0 * std::sqrt(100.0)).epsilon(1e-12));
}

TEST_CASE("linalg: cyclic tridiagonal solver vs dense elimination") {
  SplitMix64 rng(7);
  for (int n : {4, 5, 9, 17}) {
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    for (int i = 0; i < n; ++i) {
      sub[i] = rng.uniform(0.1, 1.0);
      sup[i] = rng.uniform(0.1, 1.0);
      diag[i] = 4.0 + rng.uniform(0.0, 1.0);  // diagonally dominant
      rhs[i] = rng.uniform(-1.0, 1.0);
    }
    const double ct = rng.uniform(0.1, 1.0), cb = rng.uniform(0.1, 1.0);
    const auto x = solve_cyclic_tridiagonal(sub, diag, sup, ct, cb, rhs);

    // Residual check against the full matrix.
    for (int i = 0; i < n; ++i) {
      double acc = diag[i] * x[i];
      if (i > 0) acc += sub[i] * x[i - 1];
      if (i + 1 < n) acc += sup[i] * x[i + 1];
      if (i == 0) acc += ct * x[n - 1];
      if (i == n - 1) acc += cb * x[0];
      CHECK(acc == doctest::Approx(rhs[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("linalg: thin SVD reconstructs and is orthonormal") {
  SplitMix64 rng(11);
  for (const auto [rows, cols] : {std::pair{12, 5}, std::pair{5, 12}}) {
    std::vector<std::vector<double>> a(rows, std::vector<double>(cols));
    for (auto& r : a)
      for (double& v : r) v = rng.uniform(-1.0, 1.0);
    const ThinSvd svd = thin_svd(a);

    // Non-increasing singular values.
    for (size_t i = 1; i < svd.singular_values.size(); ++i)
      CHECK(svd.singular_values[i] <= svd.singular_values[i - 1] + 1e-12);

    // Right vectors orthonormal.
    for (size_t i = 0; i < svd.right_vectors.size(); ++i)
      for (size_t j = i; j < svd.right_vectors.size(); ++j) {
        double d = 0;
        for (size_t k = 0; k < svd.right_vectors[i].size(); ++k)
          d += svd.right_vectors[i][k] * svd.right_vectors[j][k];
        CHECK(d == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
      }

    // Gram identity: A^T A v_k = s_k^2 v_k.
    for (size_t k = 0; k < svd.right_vectors.size(); ++k) {
      const auto& v = svd.right_vectors[k];
      std::vector<double> av(rows, 0.0);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) av[r] += a[r][c] * v[c];
      std::vector<double> atav(cols, 0.0);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) atav[c] += a[r][c] * av[r];
      const double s2 = svd.singular_values[k] * svd.singular_values[k];
      for (int c = 0; c < cols; ++c)
        CHECK(atav[c] == doctest::Approx(s2 * v[c]).epsilon(1e-8).scale(1.0));
    }
  }
}
