#include "morphkit/eigenshape.hpp"

#include <cmath>

#include "morphkit/errors.hpp"
#include "morphkit/linalg.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit {

std::vector<double> flatten(const PreShape& p) {
  std::vector<double> v;
  v.reserve(2 * p.points.size());
  for (const Vec2 q : p.points) {
    v.push_back(q.x);
    v.push_back(q.y);
  }
  return v;
}

EigenModel fit_pca_vectors(const std::vector<std::vector<double>>& rows) {
  const size_t n = rows.size();
  if (n < 2)
    raise(ErrorCode::insufficient_samples, "PCA needs at least 2 samples");
  const size_t dim = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != dim)
      raise(ErrorCode::dimension_mismatch, "PCA rows have mixed lengths");

  EigenModel model;
  model.n_samples = static_cast<int>(n);
  model.mean.assign(dim, 0.0);
  for (const auto& r : rows)
    for (size_t j = 0; j < dim; ++j) model.mean[j] += r[j];
  for (double& m : model.mean) m /= static_cast<double>(n);

  std::vector<std::vector<double>> centered(n, std::vector<double>(dim));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < dim; ++j) centered[i][j] = rows[i][j] - model.mean[j];

  const ThinSvd svd = thin_svd(centered);
  const size_t keep = std::min(dim, n - 1);
  model.eigenvalues.reserve(keep);
  model.eigenvectors.reserve(keep);
  for (size_t k = 0; k < keep && k < svd.singular_values.size(); ++k) {
    const double s = svd.singular_values[k];
    model.eigenvalues.push_back(s * s / static_cast<double>(n - 1));
    model.eigenvectors.push_back(svd.right_vectors[k]);
  }
  return model;
}

EigenModel fit_pca(std::span<const PreShape> preshapes) {
  if (preshapes.size() < 2)
    raise(ErrorCode::insufficient_samples, "PCA needs at least 2 pre-shapes");
  const size_t n_pts = preshapes[0].points.size();
  std::vector<std::vector<double>> rows;
  rows.reserve(preshapes.size());
  for (const auto& p : preshapes) {
    if (p.points.size() != n_pts)
      raise(ErrorCode::mismatched_sizes, "pre-shapes have mixed point counts");
    rows.push_back(flatten(p));
  }
  return fit_pca_vectors(rows);
}

EigenConfig select_dims(const EigenModel& model, double variance_fraction) {
  if (!(variance_fraction > 0.0 && variance_fraction <= 1.0))
    raise(ErrorCode::invalid_argument, "variance fraction must be in (0, 1]");
  double total = 0.0;
  for (const double e : model.eigenvalues) total += e;
  EigenConfig cfg;
  cfg.variance_fraction = variance_fraction;
  if (total <= 0.0) {
    cfg.dims = model.n_components();
    return cfg;
  }
  double acc = 0.0;
  for (int d = 0; d < model.n_components(); ++d) {
    acc += model.eigenvalues[d];
    if (acc / total >= variance_fraction - 1e-15) {
      cfg.dims = d + 1;
      return cfg;
    }
  }
  cfg.dims = model.n_components();
  return cfg;
}

std::vector<double> project(const EigenModel& model, std::span<const double> v,
                            int dims) {
  if (static_cast<int>(v.size()) != model.dim())
    raise(ErrorCode::dimension_mismatch, "projection input has wrong length");
  if (dims < 0 || dims > model.n_components())
    raise(ErrorCode::dims_exceed_model, "requested more dims than the model has");
  const auto& k = simd::active();
  std::vector<double> centered(v.size());
  for (size_t j = 0; j < v.size(); ++j) centered[j] = v[j] - model.mean[j];
  std::vector<double> scores(dims);
  for (int d = 0; d < dims; ++d)
    scores[d] = k.dot(centered.data(), model.eigenvectors[d].data(), v.size());
  return scores;
}

DistanceMatrix eigen_distances(const EigenModel& model,
                               const EigenConfig& config,
                               std::span<const PreShape> preshapes) {
  const auto& k = simd::active();
  const int dims = config.dims > 0 ? config.dims : model.n_components();
  std::vector<std::vector<double>> scores;
  scores.reserve(preshapes.size());
  std::vector<std::string> ids;
  for (const auto& p : preshapes) {
    if (2 * static_cast<int>(p.points.size()) != model.dim())
      raise(ErrorCode::dimension_mismatch,
            "pre-shape size does not match the model");
    scores.push_back(project(model, flatten(p), dims));
    ids.push_back(p.provenance);
  }

  DistanceMatrix dm;
  dm.size = static_cast<int>(preshapes.size());
  dm.ids = std::move(ids);
  dm.method = "eigen";
  dm.params = {{"variance", std::to_string(config.variance_fraction)},
               {"dims", std::to_string(dims)}};
  dm.entries.assign(static_cast<size_t>(dm.size) * dm.size, 0.0);
  for (int i = 0; i < dm.size; ++i)
    for (int j = i + 1; j < dm.size; ++j) {
      const double d = std::sqrt(
          k.squared_distance(scores[i].data(), scores[j].data(), dims));
      dm.at(i, j) = d;
      dm.at(j, i) = d;
    }
  return dm;
}

}  // namespace morphkit
