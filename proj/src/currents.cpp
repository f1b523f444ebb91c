#include "morphkit/currents.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/errors.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit {
namespace {

// Clamped uniform knot vector on [0,1]: degree+1 zeros, m-1 interior knots,
// degree+1 ones. Basis count per axis = mesh + degree.
std::vector<double> make_knots(int mesh, int degree) {
  std::vector<double> u;
  u.reserve(mesh + 2 * degree + 1);
  for (int i = 0; i <= degree; ++i) u.push_back(0.0);
  for (int i = 1; i < mesh; ++i) u.push_back(static_cast<double>(i) / mesh);
  for (int i = 0; i <= degree; ++i) u.push_back(1.0);
  return u;
}

int find_span(double t, int mesh, int degree) {
  int cell = static_cast<int>(t * mesh);
  cell = std::clamp(cell, 0, mesh - 1);
  return degree + cell;
}

// Cox-de Boor: the degree+1 non-vanishing basis values at t for the span.
void basis_funs(int span, double t, int degree, const std::vector<double>& u,
                double* out) {
  out[0] = 1.0;
  double left[8], right[8];
  for (int j = 1; j <= degree; ++j) {
    left[j] = t - u[span + 1 - j];
    right[j] = u[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double tmp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    out[j] = saved;
  }
}

int reflect_index(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

// Separable Gaussian blur over the coefficient grid, scatter-side with
// reflected boundaries so that total mass is conserved exactly (which keeps
// the closed-curve zero-sum property intact).
void blur_plane(std::vector<double>& plane, int n, double sigma) {
  if (sigma <= 0.0) return;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> w(2 * radius + 1);
  double total = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    w[d + radius] = std::exp(-0.5 * d * d / (sigma * sigma));
    total += w[d + radius];
  }
  for (double& v : w) v /= total;

  std::vector<double> tmp(plane.size());
  // rows
  for (int y = 0; y < n; ++y) {
    double* dst = &tmp[static_cast<size_t>(y) * n];
    std::fill(dst, dst + n, 0.0);
    const double* src = &plane[static_cast<size_t>(y) * n];
    for (int x = 0; x < n; ++x)
      for (int d = -radius; d <= radius; ++d)
        dst[reflect_index(x + d, n)] += w[d + radius] * src[x];
  }
  // columns
  std::fill(plane.begin(), plane.end(), 0.0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const double v = tmp[static_cast<size_t>(y) * n + x];
      for (int d = -radius; d <= radius; ++d)
        plane[static_cast<size_t>(reflect_index(y + d, n)) * n + x] +=
            w[d + radius] * v;
    }
}

void check_config(const CurrentConfig& c) {
  if (c.mesh < 2) raise(ErrorCode::config_out_of_range, "mesh must be >= 2");
  if (c.order < 0 || c.order > 7)
    raise(ErrorCode::config_out_of_range, "order must be in [0, 7]");
  if (c.sigma < 0.0) raise(ErrorCode::config_out_of_range, "sigma must be >= 0");
}

}  // namespace

std::vector<double> CurrentRep::flat() const {
  std::vector<double> v;
  v.reserve(coeff_x.size() * 2);
  v.insert(v.end(), coeff_x.begin(), coeff_x.end());
  v.insert(v.end(), coeff_y.begin(), coeff_y.end());
  return v;
}

CurrentRep current_representation(const ShapeSample& sample,
                                  const CurrentConfig& config) {
  check_config(config);
  const int n = sample.n();
  if (n < 3) raise(ErrorCode::invalid_argument, "current needs >= 3 points");

  // Normalize: centroid at origin, unit arc length, then the fixed isotropic
  // map into the unit square with 10% margin. A centered closed curve of
  // unit length always fits in [-0.5, 0.5]^2, so [0.1, 0.9]^2 after mapping.
  const Vec2 c = point_mean(sample.points);
  const double len = polygon_perimeter(sample.points);
  if (len < 1e-14) raise(ErrorCode::degenerate_curve, "zero arc length");
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i)
    pts[i] = Vec2{0.5, 0.5} + 0.8 / len * (sample.points[i] - c);

  const int deg = config.order;
  const int nb = config.mesh + deg;
  const std::vector<double> knots = make_knots(config.mesh, deg);

  CurrentRep rep;
  rep.config = config;
  rep.provenance = sample.id;
  rep.coeff_x.assign(static_cast<size_t>(nb) * nb, 0.0);
  rep.coeff_y.assign(static_cast<size_t>(nb) * nb, 0.0);

  double bx[8], by[8];
  for (int i = 0; i < n; ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[(i + 1) % n];
    const Vec2 mid = 0.5 * (a + b);
    const Vec2 delta = b - a;
    const int sx = find_span(mid.x, config.mesh, deg);
    const int sy = find_span(mid.y, config.mesh, deg);
    basis_funs(sx, mid.x, deg, knots, bx);
    basis_funs(sy, mid.y, deg, knots, by);
    for (int v = 0; v <= deg; ++v) {
      const int ky = sy - deg + v;
      double* rowx = &rep.coeff_x[static_cast<size_t>(ky) * nb];
      double* rowy = &rep.coeff_y[static_cast<size_t>(ky) * nb];
      for (int u = 0; u <= deg; ++u) {
        const int kx = sx - deg + u;
        const double w = bx[u] * by[v];
        rowx[kx] += w * delta.x;
        rowy[kx] += w * delta.y;
      }
    }
  }

  blur_plane(rep.coeff_x, nb, config.sigma);
  blur_plane(rep.coeff_y, nb, config.sigma);
  return rep;
}

Vec2 constant_field_response(const CurrentRep& rep) {
  double sx = 0.0, sy = 0.0;
  for (const double v : rep.coeff_x) sx += v;
  for (const double v : rep.coeff_y) sy += v;
  return {sx, sy};
}

DistanceMatrix current_distances(std::span<const CurrentRep> reps) {
  if (reps.empty())
    raise(ErrorCode::insufficient_samples, "current_distances: no inputs");
  for (const auto& r : reps)
    if (!(r.config == reps[0].config))
      raise(ErrorCode::config_mismatch, "current reps built with mixed configs");

  const auto& k = simd::active();
  DistanceMatrix dm;
  dm.size = static_cast<int>(reps.size());
  dm.method = "gc";
  dm.params = {{"s", std::to_string(reps[0].config.order)},
               {"mesh", std::to_string(reps[0].config.mesh)},
               {"sigma", std::to_string(reps[0].config.sigma)}};
  for (const auto& r : reps) dm.ids.push_back(r.provenance);
  dm.entries.assign(static_cast<size_t>(dm.size) * dm.size, 0.0);

  const size_t plane = reps[0].coeff_x.size();
  for (int i = 0; i < dm.size; ++i)
    for (int j = i + 1; j < dm.size; ++j) {
      const double d = std::sqrt(
          k.squared_distance(reps[i].coeff_x.data(), reps[j].coeff_x.data(), plane) +
          k.squared_distance(reps[i].coeff_y.data(), reps[j].coeff_y.data(), plane));
      dm.at(i, j) = d;
      dm.at(j, i) = d;
    }
  return dm;
}

EigenModel current_pca(std::span<const CurrentRep> reps) {
  if (reps.size() < 2)
    raise(ErrorCode::insufficient_samples, "current_pca needs >= 2 reps");
  for (const auto& r : reps)
    if (!(r.config == reps[0].config))
      raise(ErrorCode::config_mismatch, "current reps built with mixed configs");
  std::vector<std::vector<double>> rows;
  rows.reserve(reps.size());
  for (const auto& r : reps) rows.push_back(r.flat());
  return fit_pca_vectors(rows);
}

}  // namespace morphkit
