// AVX2+FMA kernel variants. Compiled only when the toolchain supports
// -mavx2; used only when the running CPU reports AVX2 and FMA.

#include <cmath>
#include <immintrin.h>

#include "morphkit/simd/kernels.hpp"

namespace morphkit::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// exp() for 4 doubles, Cephes-style rational approximation:
//   exp(x) = 2^n * (1 + 2*x*P(x^2) / (Q(x^2) - x*P(x^2))),  n = round(x/ln 2)
// Accurate to ~1 ulp over the clamped range. Inputs here are always <= 0
// (Gaussian kernels); the low clamp makes exp underflow to ~3e-308.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
  x = _mm256_min_pd(x, _mm256_set1_pd(708.0));

  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, log2e),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(n, ln2_hi, x);
  x = _mm256_fnmadd_pd(n, ln2_lo, x);

  const __m256d xx = _mm256_mul_pd(x, x);

  __m256d px = _mm256_set1_pd(1.26177193074810590878e-4);
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(3.02994407707441961300e-2));
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910e-1));
  px = _mm256_mul_pd(px, x);

  __m256d qx = _mm256_set1_pd(3.00198505138664455042e-6);
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.52448340349684104192e-3));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766e-1));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000005e0));

  const __m256d rational =
      _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  __m256d e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), rational,
                              _mm256_set1_pd(1.0));

  // Scale by 2^n via direct exponent-field construction.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
  n64 = _mm256_slli_epi64(n64, 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(n64));
  return e;
}

double dot_avx2(const double* x, const double* y, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq_avx2(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double squared_distance_avx2(const double* x, const double* y, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void axpby_avx2(double a, const double* x, double b, const double* y,
                double* out, size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i,
                     _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), t));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void dot_cross_row_avx2(double ax, double ay, const double* bx,
                        const double* by, size_t n, double* dots,
                        double* crosses) {
  const __m256d vax = _mm256_set1_pd(ax);
  const __m256d vay = _mm256_set1_pd(ay);
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d vbx = _mm256_loadu_pd(bx + j);
    const __m256d vby = _mm256_loadu_pd(by + j);
    _mm256_storeu_pd(dots + j,
                     _mm256_fmadd_pd(vax, vbx, _mm256_mul_pd(vay, vby)));
    _mm256_storeu_pd(crosses + j,
                     _mm256_fmsub_pd(vax, vby, _mm256_mul_pd(vay, vbx)));
  }
  for (; j < n; ++j) {
    dots[j] = ax * bx[j] + ay * by[j];
    crosses[j] = ax * by[j] - ay * bx[j];
  }
}

void gauss_flow_avx2(const double* xs, const double* ys, const double* px,
                     const double* py, size_t n, double inv_two_w2, double* vx,
                     double* vy) {
  const __m256d vc = _mm256_set1_pd(inv_two_w2);
  for (size_t i = 0; i < n; ++i) {
    const __m256d xi = _mm256_set1_pd(xs[i]);
    const __m256d yi = _mm256_set1_pd(ys[i]);
    __m256d accx = _mm256_setzero_pd();
    __m256d accy = _mm256_setzero_pd();
    size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(xs + j));
      const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(ys + j));
      const __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
      const __m256d k = exp_pd(_mm256_mul_pd(_mm256_sub_pd(
                                   _mm256_setzero_pd(), d2),
                               vc));
      accx = _mm256_fmadd_pd(k, _mm256_loadu_pd(px + j), accx);
      accy = _mm256_fmadd_pd(k, _mm256_loadu_pd(py + j), accy);
    }
    double sx = hsum(accx);
    double sy = hsum(accy);
    for (; j < n; ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      const double k = std::exp(-(dx * dx + dy * dy) * inv_two_w2);
      sx += k * px[j];
      sy += k * py[j];
    }
    vx[i] = sx;
    vy[i] = sy;
  }
}

void gauss_grad_x_avx2(const double* xs, const double* ys, const double* px,
                       const double* py, const double* ax, const double* ay,
                       size_t n, double inv_two_w2, double c1, double c2,
                       double* gx, double* gy) {
  const __m256d vw = _mm256_set1_pd(inv_two_w2);
  const __m256d vc1 = _mm256_set1_pd(c1);
  const __m256d vc2 = _mm256_set1_pd(c2);
  for (size_t k = 0; k < n; ++k) {
    const __m256d xk = _mm256_set1_pd(xs[k]);
    const __m256d yk = _mm256_set1_pd(ys[k]);
    const __m256d pxk = _mm256_set1_pd(px[k]);
    const __m256d pyk = _mm256_set1_pd(py[k]);
    const __m256d axk = _mm256_set1_pd(ax[k]);
    const __m256d ayk = _mm256_set1_pd(ay[k]);
    __m256d accx = _mm256_setzero_pd();
    __m256d accy = _mm256_setzero_pd();
    size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d dx = _mm256_sub_pd(xk, _mm256_loadu_pd(xs + j));
      const __m256d dy = _mm256_sub_pd(yk, _mm256_loadu_pd(ys + j));
      const __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
      const __m256d kv = exp_pd(_mm256_mul_pd(
          _mm256_sub_pd(_mm256_setzero_pd(), d2), vw));
      const __m256d pxj = _mm256_loadu_pd(px + j);
      const __m256d pyj = _mm256_loadu_pd(py + j);
      const __m256d axj = _mm256_loadu_pd(ax + j);
      const __m256d ayj = _mm256_loadu_pd(ay + j);
      const __m256d pj_ak = _mm256_fmadd_pd(pxj, axk, _mm256_mul_pd(pyj, ayk));
      const __m256d pk_aj = _mm256_fmadd_pd(pxk, axj, _mm256_mul_pd(pyk, ayj));
      const __m256d pk_pj = _mm256_fmadd_pd(pxk, pxj, _mm256_mul_pd(pyk, pyj));
      const __m256d inner = _mm256_fmadd_pd(
          vc1, _mm256_add_pd(pj_ak, pk_aj), _mm256_mul_pd(vc2, pk_pj));
      const __m256d w = _mm256_mul_pd(kv, inner);
      accx = _mm256_fmadd_pd(w, dx, accx);
      accy = _mm256_fmadd_pd(w, dy, accy);
    }
    double sx = hsum(accx);
    double sy = hsum(accy);
    for (; j < n; ++j) {
      const double dx = xs[k] - xs[j];
      const double dy = ys[k] - ys[j];
      const double kv = std::exp(-(dx * dx + dy * dy) * inv_two_w2);
      const double pj_ak = px[j] * ax[k] + py[j] * ay[k];
      const double pk_aj = px[k] * ax[j] + py[k] * ay[j];
      const double pk_pj = px[k] * px[j] + py[k] * py[j];
      const double w = kv * (c1 * (pj_ak + pk_aj) + c2 * pk_pj);
      sx += w * dx;
      sy += w * dy;
    }
    gx[k] = sx;
    gy[k] = sy;
  }
}

}  // namespace

const Kernels* avx2_kernels_impl() {
  static const Kernels k = {
      "avx2",
      dot_avx2,
      sum_sq_avx2,
      squared_distance_avx2,
      axpby_avx2,
      dot_cross_row_avx2,
      gauss_flow_avx2,
      gauss_grad_x_avx2,
  };
  return &k;
}

}  // namespace morphkit::simd
