#include "morphkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "morphkit/errors.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit {
namespace {

// One-sided Jacobi: rotates column pairs of M (m x n, column-major storage)
// until all pairs are orthogonal, accumulating the rotations in V (n x n).
// On exit the columns of M are U*sigma and V holds the right singular
// vectors of the original M.
void one_sided_jacobi(std::vector<std::vector<double>>& cols,
                      std::vector<std::vector<double>>& v) {
  const auto& k = simd::active();
  const size_t n = cols.size();
  const size_t m = n ? cols[0].size() : 0;
  if (n == 0 || m == 0) return;

  v.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  const double eps = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (size_t p = 0; p + 1 < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const double alpha = k.sum_sq(cols[p].data(), m);
        const double beta = k.sum_sq(cols[q].data(), m);
        const double gamma = k.dot(cols[p].data(), cols[q].data(), m);
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0)
          continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (size_t i = 0; i < m; ++i) {
          const double a = cols[p][i];
          const double b = cols[q][i];
          cols[p][i] = c * a - s * b;
          cols[q][i] = s * a + c * b;
        }
        for (size_t i = 0; i < n; ++i) {
          const double a = v[p][i];
          const double b = v[q][i];
          v[p][i] = c * a - s * b;
          v[q][i] = s * a + c * b;
        }
      }
    }
    if (!rotated) break;
  }
}

// Deterministic sign: make the largest-magnitude entry positive.
void canonical_sign(std::vector<double>& vec) {
  size_t arg = 0;
  for (size_t i = 1; i < vec.size(); ++i)
    if (std::abs(vec[i]) > std::abs(vec[arg])) arg = i;
  if (!vec.empty() && vec[arg] < 0)
    for (double& x : vec) x = -x;
}

}  // namespace

ThinSvd thin_svd(const std::vector<std::vector<double>>& rows) {
  const size_t n_rows = rows.size();
  const size_t n_cols = n_rows ? rows[0].size() : 0;
  if (n_rows == 0 || n_cols == 0)
    raise(ErrorCode::invalid_argument, "thin_svd: empty matrix");
  for (const auto& r : rows)
    if (r.size() != n_cols)
      raise(ErrorCode::dimension_mismatch, "thin_svd: ragged rows");

  ThinSvd out;
  const auto& k = simd::active();

  if (n_cols <= n_rows) {
    // Work on A directly: columns to orthogonalize are the n_cols columns.
    std::vector<std::vector<double>> cols(n_cols,
                                          std::vector<double>(n_rows));
    for (size_t i = 0; i < n_rows; ++i)
      for (size_t j = 0; j < n_cols; ++j) cols[j][i] = rows[i][j];
    std::vector<std::vector<double>> v;
    one_sided_jacobi(cols, v);
    std::vector<size_t> order(n_cols);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> sigma(n_cols);
    for (size_t j = 0; j < n_cols; ++j)
      sigma[j] = std::sqrt(k.sum_sq(cols[j].data(), n_rows));
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return sigma[a] > sigma[b]; });
    for (size_t j : order) {
      out.singular_values.push_back(sigma[j]);
      std::vector<double> rv = v[j];
      canonical_sign(rv);
      out.right_vectors.push_back(std::move(rv));
    }
  } else {
    // Wide matrix: run Jacobi on A^T (n_cols x n_rows). With A^T = U S V^T,
    // A = V S U^T, so A's right singular vectors are the normalized columns
    // of A^T * V_jacobi, i.e. the orthogonalized columns themselves.
    std::vector<std::vector<double>> cols(n_rows,
                                          std::vector<double>(n_cols));
    for (size_t i = 0; i < n_rows; ++i)
      for (size_t j = 0; j < n_cols; ++j) cols[i][j] = rows[i][j];
    std::vector<std::vector<double>> v;
    one_sided_jacobi(cols, v);
    std::vector<size_t> order(n_rows);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> sigma(n_rows);
    for (size_t j = 0; j < n_rows; ++j)
      sigma[j] = std::sqrt(k.sum_sq(cols[j].data(), n_cols));
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return sigma[a] > sigma[b]; });
    for (size_t j : order) {
      std::vector<double> rv = cols[j];
      const double s = sigma[j];
      if (s > 0)
        for (double& x : rv) x /= s;
      else
        std::fill(rv.begin(), rv.end(), 0.0);
      canonical_sign(rv);
      out.singular_values.push_back(s);
      out.right_vectors.push_back(std::move(rv));
    }
  }
  return out;
}

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& sup,
                                             double corner_top,
                                             double corner_bottom,
                                             const std::vector<double>& rhs) {
  const size_t n = diag.size();
  if (n < 3 || sub.size() != n || sup.size() != n || rhs.size() != n)
    raise(ErrorCode::invalid_argument, "cyclic tridiagonal: bad sizes");

  auto thomas = [&](const std::vector<double>& b,
                    const std::vector<double>& r) {
    std::vector<double> c(n), d(n), x(n);
    c[0] = sup[0] / b[0];
    d[0] = r[0] / b[0];
    for (size_t i = 1; i < n; ++i) {
      const double m = b[i] - sub[i] * c[i - 1];
      c[i] = sup[i] / m;
      d[i] = (r[i] - sub[i] * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  };

  // Sherman-Morrison: A = B + u v^T with u = (gamma,0,...,corner_bottom),
  // v = (1,0,...,corner_top/gamma).
  const double gamma = -diag[0];
  std::vector<double> b = diag;
  b[0] = diag[0] - gamma;
  b[n - 1] = diag[n - 1] - corner_top * corner_bottom / gamma;

  const std::vector<double> x = thomas(b, rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_bottom;
  const std::vector<double> z = thomas(b, u);

  const double num = x[0] + corner_top * x[n - 1] / gamma;
  const double den = 1.0 + z[0] + corner_top * z[n - 1] / gamma;
  const double fact = num / den;

  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
  return out;
}

}  // namespace morphkit
