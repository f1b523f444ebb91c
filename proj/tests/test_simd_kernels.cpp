// Scalar vs AVX2 kernel equivalence. The scalar implementations are the
// reference; the vector variants must agree within floating-point
// reassociation noise (FMA contraction, vectorized exp).

#include <cmath>
#include <doctest.h>
#include <vector>

#include "morphkit/rng.hpp"
#include "morphkit/simd/kernels.hpp"

using namespace morphkit;

namespace {

std::vector<double> random_vec(SplitMix64& rng, size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

bool close_rel(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace

TEST_CASE("simd: backend dispatch reports a valid backend") {
  const auto& k = simd::active();
  CHECK(k.dot != nullptr);
  CHECK((simd::active_backend() == simd::Backend::scalar ||
         simd::active_backend() == simd::Backend::avx2));
}

TEST_CASE("simd: scalar and avx2 kernels agree") {
  const simd::Kernels* avx2 = simd::avx2_kernels();
  if (!avx2) {
    MESSAGE("AVX2 backend not available; equivalence suite skipped");
    return;
  }
  const simd::Kernels& ref = simd::scalar_kernels();
  SplitMix64 rng(20240817);

  for (const size_t n : {1u, 2u, 3u, 5u, 7u, 8u, 13u, 16u, 33u, 100u, 1001u}) {
    const auto x = random_vec(rng, n, -2.0, 2.0);
    const auto y = random_vec(rng, n, -2.0, 2.0);

    CHECK(close_rel(ref.dot(x.data(), y.data(), n), avx2->dot(x.data(), y.data(), n), 1e-13));
    CHECK(close_rel(ref.sum_sq(x.data(), n), avx2->sum_sq(x.data(), n), 1e-13));
    CHECK(close_rel(ref.squared_distance(x.data(), y.data(), n),
                    avx2->squared_distance(x.data(), y.data(), n), 1e-13));

    std::vector<double> out_a(n), out_b(n);
    ref.axpby(1.7, x.data(), -0.3, y.data(), out_a.data(), n);
    avx2->axpby(1.7, x.data(), -0.3, y.data(), out_b.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(close_rel(out_a[i], out_b[i], 1e-14));

    std::vector<double> da(n), ca(n), db(n), cb(n);
    ref.dot_cross_row(0.8, -1.2, x.data(), y.data(), n, da.data(), ca.data());
    avx2->dot_cross_row(0.8, -1.2, x.data(), y.data(), n, db.data(), cb.data());
    for (size_t i = 0; i < n; ++i) {
      CHECK(close_rel(da[i], db[i], 1e-14));
      CHECK(close_rel(ca[i], cb[i], 1e-14));
    }
  }
}

TEST_CASE("simd: gaussian kernels agree across backends") {
  const simd::Kernels* avx2 = simd::avx2_kernels();
  if (!avx2) return;
  const simd::Kernels& ref = simd::scalar_kernels();
  SplitMix64 rng(5150);

  for (const size_t n : {1u, 3u, 4u, 9u, 20u, 63u, 128u}) {
    const auto xs = random_vec(rng, n, -1.0, 1.0);
    const auto ys = random_vec(rng, n, -1.0, 1.0);
    const auto px = random_vec(rng, n, -0.5, 0.5);
    const auto py = random_vec(rng, n, -0.5, 0.5);
    const auto ax = random_vec(rng, n, -0.5, 0.5);
    const auto ay = random_vec(rng, n, -0.5, 0.5);
    const double inv_two_w2 = 1.0 / (2.0 * 0.4 * 0.4);

    std::vector<double> va(n), vb(n), wa(n), wb(n);
    ref.gauss_flow(xs.data(), ys.data(), px.data(), py.data(), n, inv_two_w2,
                   va.data(), wa.data());
    avx2->gauss_flow(xs.data(), ys.data(), px.data(), py.data(), n, inv_two_w2,
                     vb.data(), wb.data());
    for (size_t i = 0; i < n; ++i) {
      CHECK(close_rel(va[i], vb[i], 1e-12));
      CHECK(close_rel(wa[i], wb[i], 1e-12));
    }

    std::vector<double> ga(n), gb(n), ha(n), hb(n);
    ref.gauss_grad_x(xs.data(), ys.data(), px.data(), py.data(), ax.data(),
                     ay.data(), n, inv_two_w2, -1.0, -2.0, ga.data(), ha.data());
    avx2->gauss_grad_x(xs.data(), ys.data(), px.data(), py.data(), ax.data(),
                       ay.data(), n, inv_two_w2, -1.0, -2.0, gb.data(), hb.data());
    for (size_t i = 0; i < n; ++i) {
      CHECK(close_rel(ga[i], gb[i], 1e-12));
      CHECK(close_rel(ha[i], hb[i], 1e-12));
    }
  }
}

TEST_CASE("simd: vector exp path matches std::exp through gauss_flow") {
  // One point at the origin with p = 1 probes exp(-d^2/2w^2) directly.
  const simd::Kernels* avx2 = simd::avx2_kernels();
  if (!avx2) return;
  const size_t n = 64;
  std::vector<double> xs(n), ys(n, 0.0), px(n, 0.0), py(n, 0.0), vx(n), vy(n);
  for (size_t i = 0; i < n; ++i) xs[i] = -8.0 + 16.0 * static_cast<double>(i) / n;
  px[0] = 1.0;  // v_i = exp(-(x_i - x_0)^2 * c)
  avx2->gauss_flow(xs.data(), ys.data(), px.data(), py.data(), n, 0.5, vx.data(), vy.data());
  for (size_t i = 0; i < n; ++i) {
    const double d = xs[i] - xs[0];
    const double expected = std::exp(-d * d * 0.5);
    CHECK(close_rel(vx[i], expected, 1e-13));
  }
}
