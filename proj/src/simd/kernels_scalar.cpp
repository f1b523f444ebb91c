// Scalar reference kernels. These define the semantics; the vector variants
// must agree with them within floating-point reassociation tolerance.

#include <cmath>

#include "morphkit/simd/kernels.hpp"

namespace morphkit::simd {
namespace {

double dot_scalar(const double* x, const double* y, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq_scalar(const double* x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double squared_distance_scalar(const double* x, const double* y, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

void axpby_scalar(double a, const double* x, double b, const double* y,
                  double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void dot_cross_row_scalar(double ax, double ay, const double* bx,
                          const double* by, size_t n, double* dots,
                          double* crosses) {
  for (size_t j = 0; j < n; ++j) {
    dots[j] = ax * bx[j] + ay * by[j];
    crosses[j] = ax * by[j] - ay * bx[j];
  }
}

void gauss_flow_scalar(const double* xs, const double* ys, const double* px,
                       const double* py, size_t n, double inv_two_w2,
                       double* vx, double* vy) {
  for (size_t i = 0; i < n; ++i) {
    const double xi = xs[i], yi = ys[i];
    double ax = 0.0, ay = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double dx = xi - xs[j];
      const double dy = yi - ys[j];
      const double k = std::exp(-(dx * dx + dy * dy) * inv_two_w2);
      ax += k * px[j];
      ay += k * py[j];
    }
    vx[i] = ax;
    vy[i] = ay;
  }
}

void gauss_grad_x_scalar(const double* xs, const double* ys, const double* px,
                         const double* py, const double* ax, const double* ay,
                         size_t n, double inv_two_w2, double c1, double c2,
                         double* gx, double* gy) {
  for (size_t k = 0; k < n; ++k) {
    const double xk = xs[k], yk = ys[k];
    const double pxk = px[k], pyk = py[k];
    const double axk = ax[k], ayk = ay[k];
    double sx = 0.0, sy = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double dx = xk - xs[j];
      const double dy = yk - ys[j];
      const double kv = std::exp(-(dx * dx + dy * dy) * inv_two_w2);
      const double pj_ak = px[j] * axk + py[j] * ayk;
      const double pk_aj = pxk * ax[j] + pyk * ay[j];
      const double pk_pj = pxk * px[j] + pyk * py[j];
      const double w = kv * (c1 * (pj_ak + pk_aj) + c2 * pk_pj);
      sx += w * dx;
      sy += w * dy;
    }
    gx[k] = sx;
    gy[k] = sy;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k = {
      "scalar",
      dot_scalar,
      sum_sq_scalar,
      squared_distance_scalar,
      axpby_scalar,
      dot_cross_row_scalar,
      gauss_flow_scalar,
      gauss_grad_x_scalar,
  };
  return k;
}

}  // namespace morphkit::simd
