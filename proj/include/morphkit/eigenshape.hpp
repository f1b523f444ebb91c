#pragma once

#include <span>
#include <vector>

#include "morphkit/distmat.hpp"
#include "morphkit/outline.hpp"

namespace morphkit {

// PCA basis over stacked coordinate vectors (x1,y1,...,xN,yN).
struct EigenModel {
  std::vector<double> mean;                       // length d
  std::vector<double> eigenvalues;                // non-increasing
  std::vector<std::vector<double>> eigenvectors;  // orthonormal, each length d
  int n_samples = 0;

  int dim() const { return static_cast<int>(mean.size()); }
  int n_components() const { return static_cast<int>(eigenvalues.size()); }
};

struct EigenConfig {
  double variance_fraction = 1.0;
  int dims = 0;
};

std::vector<double> flatten(const PreShape& p);

// PCA via SVD of the centered data matrix. Retains min(dim, n_samples - 1)
// components; eigenvalues use the n-1 covariance denominator.
EigenModel fit_pca(std::span<const PreShape> preshapes);
EigenModel fit_pca_vectors(const std::vector<std::vector<double>>& rows);

// Smallest d whose cumulative explained-variance fraction reaches
// variance_fraction.
EigenConfig select_dims(const EigenModel& model, double variance_fraction);

// Scores of a vector in the first `dims` components.
std::vector<double> project(const EigenModel& model, std::span<const double> v,
                            int dims);

// Euclidean distances between score vectors in the first config.dims
// components.
DistanceMatrix eigen_distances(const EigenModel& model,
                               const EigenConfig& config,
                               std::span<const PreShape> preshapes);

}  // namespace morphkit
