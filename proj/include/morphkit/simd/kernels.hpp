#pragma once

#include <cstddef>

namespace morphkit::simd {

// Data-parallel inner loops used by the distance computations. Every kernel
// has a scalar reference implementation and, on x86 with AVX2+FMA, a vector
// variant selected once at startup. The two backends are equivalence-tested;
// results may differ in the last few ulps (FMA contraction, vector exp).
//
// Backend selection: auto-detected, overridable with MORPHKIT_SIMD=scalar
// or MORPHKIT_SIMD=avx2 in the environment, or set_backend() from code.
struct Kernels {
  const char* name;

  // Plain reductions over double arrays.
  double (*dot)(const double* x, const double* y, size_t n);
  double (*sum_sq)(const double* x, size_t n);
  double (*squared_distance)(const double* x, const double* y, size_t n);

  // out[i] = a*x[i] + b*y[i]
  void (*axpby)(double a, const double* x, double b, const double* y,
                double* out, size_t n);

  // Row of pointwise dot/cross products of one 2-vector against a 2-channel
  // array: dots[j] = ax*bx[j] + ay*by[j], crosses[j] = ax*by[j] - ay*bx[j].
  void (*dot_cross_row)(double ax, double ay, const double* bx,
                        const double* by, size_t n, double* dots,
                        double* crosses);

  // Gaussian-kernel weighted sums over a point cloud (xs, ys):
  //   K_ij = exp(-((xs_i-xs_j)^2 + (ys_i-ys_j)^2) * inv_two_w2)
  //   (vx_i, vy_i) = sum_j K_ij * (px_j, py_j)
  void (*gauss_flow)(const double* xs, const double* ys, const double* px,
                     const double* py, size_t n, double inv_two_w2, double* vx,
                     double* vy);

  // Positional gradient sums for the same kernel:
  //   (gx_k, gy_k) = sum_j K_kj * (x_k - x_j) *
  //                  [ c1*((p_j.a_k) + (p_k.a_j)) + c2*(p_k.p_j) ]
  void (*gauss_grad_x)(const double* xs, const double* ys, const double* px,
                       const double* py, const double* ax, const double* ay,
                       size_t n, double inv_two_w2, double c1, double c2,
                       double* gx, double* gy);
};

enum class Backend { scalar, avx2 };

const Kernels& scalar_kernels();
// Null when not compiled in or not supported by the running CPU.
const Kernels* avx2_kernels();

const Kernels& active();
Backend active_backend();
// Returns false (and leaves the backend unchanged) if unsupported.
bool set_backend(Backend b);

}  // namespace morphkit::simd
