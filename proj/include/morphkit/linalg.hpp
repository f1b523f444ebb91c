#pragma once

#include <cstddef>
#include <vector>

namespace morphkit {

// Thin SVD of a dense row-major matrix, reporting singular values and right
// singular vectors. Uses one-sided Jacobi on the smaller side of the matrix;
// robust and fully deterministic, which matters more here than peak speed.
struct ThinSvd {
  std::vector<double> singular_values;           // non-increasing
  std::vector<std::vector<double>> right_vectors;  // each of length n_cols
};

ThinSvd thin_svd(const std::vector<std::vector<double>>& rows);

// Solves a cyclic tridiagonal system. sub[i], diag[i], sup[i] are the
// coefficients of row i on x[i-1], x[i], x[i+1]; corner_top is row 0's
// coefficient on x[n-1] and corner_bottom is row n-1's coefficient on x[0].
// n must be >= 3. Sherman-Morrison on top of the Thomas algorithm.
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& sup,
                                             double corner_top,
                                             double corner_bottom,
                                             const std::vector<double>& rhs);

}  // namespace morphkit
