#include "morphkit/procrustes.hpp"

#include <cmath>

#include "morphkit/errors.hpp"

namespace morphkit {
namespace {

std::vector<Vec2> centered_unit(const std::vector<Vec2>& pts) {
  const Vec2 c = point_mean(pts);
  double ss = 0.0;
  for (const Vec2 p : pts) ss += norm_sq(p - c);
  const double size = std::sqrt(ss);
  if (size < 1e-14)
    raise(ErrorCode::degenerate_shape, "all points coincide");
  std::vector<Vec2> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) out[i] = (pts[i] - c) / size;
  return out;
}

}  // namespace

PreShape to_preshape(const ShapeSample& sample) {
  PreShape p;
  p.points = centered_unit(sample.points);
  p.provenance = sample.id;
  return p;
}

Mat2 optimal_rotation(std::span<const Vec2> src, std::span<const Vec2> dst,
                      bool allow_reflection) {
  if (src.size() != dst.size())
    raise(ErrorCode::mismatched_sizes, "optimal_rotation: point counts differ");
  // Closed form of the det +1 orthogonal Procrustes solution in 2-D:
  // maximize sum <dst_i, R src_i> over rotations.
  double sd = 0.0, sc = 0.0;
  for (size_t i = 0; i < src.size(); ++i) {
    sd += dot(src[i], dst[i]);
    sc += cross(src[i], dst[i]);
  }
  const Mat2 proper = Mat2::rotation(std::atan2(sc, sd));
  if (!allow_reflection) return proper;

  // Improper candidate: reflect across the x axis first, then rotate.
  double sdr = 0.0, scr = 0.0;
  for (size_t i = 0; i < src.size(); ++i) {
    const Vec2 r{src[i].x, -src[i].y};
    sdr += dot(r, dst[i]);
    scr += cross(r, dst[i]);
  }
  if (std::hypot(scr, sdr) <= std::hypot(sc, sd)) return proper;
  const Mat2 rot = Mat2::rotation(std::atan2(scr, sdr));
  const Mat2 reflect{1.0, 0.0, 0.0, -1.0};
  return rot * reflect;
}

std::vector<PreShape> procrustes_align(std::span<const ShapeSample> samples,
                                       const GpaOptions& opts) {
  if (samples.empty())
    raise(ErrorCode::insufficient_samples, "procrustes_align: no samples");
  const size_t n = samples[0].points.size();
  for (const auto& s : samples)
    if (s.points.size() != n)
      raise(ErrorCode::mismatched_sizes, "procrustes_align: point counts differ");

  std::vector<std::vector<Vec2>> configs;
  configs.reserve(samples.size());
  for (const auto& s : samples) configs.push_back(centered_unit(s.points));

  std::vector<Vec2> mean = configs[0];
  std::vector<Mat2> rot(samples.size(), Mat2::identity());

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    std::vector<Vec2> next(n, Vec2{});
    for (size_t s = 0; s < configs.size(); ++s) {
      rot[s] = optimal_rotation(configs[s], mean, opts.allow_reflection);
      for (size_t i = 0; i < n; ++i) next[i] += rot[s] * configs[s][i];
    }
    for (Vec2& p : next) p = p / static_cast<double>(configs.size());
    // Re-normalize the mean to unit centroid size (rotations keep each
    // configuration centered, so only the scale needs fixing).
    double ss = 0.0;
    for (const Vec2 p : next) ss += norm_sq(p);
    const double size = std::sqrt(ss);
    if (size < 1e-14)
      raise(ErrorCode::degenerate_shape, "degenerate mean configuration");
    for (Vec2& p : next) p = p / size;

    double delta = 0.0;
    for (size_t i = 0; i < n; ++i) delta += norm_sq(next[i] - mean[i]);
    mean = std::move(next);
    if (std::sqrt(delta) < opts.tol) break;
  }

  // Final fit against the converged mean, then pin the rotational gauge so
  // the first sample comes out unrotated. A joint rotation of all outputs is
  // still an optimal alignment; pinning it makes the result a fixed point of
  // re-alignment (and keeps the single-sample case literally unrotated).
  for (size_t s = 0; s < configs.size(); ++s)
    rot[s] = optimal_rotation(configs[s], mean, opts.allow_reflection);
  const Mat2 gauge = transpose(rot[0]);

  std::vector<PreShape> out(samples.size());
  for (size_t s = 0; s < samples.size(); ++s) {
    out[s].provenance = samples[s].id;
    out[s].points.resize(n);
    const Mat2 r = gauge * rot[s];
    for (size_t i = 0; i < n; ++i) out[s].points[i] = r * configs[s][i];
  }
  return out;
}

double procrustes_distance(const PreShape& a, const PreShape& b) {
  const Mat2 r = optimal_rotation(a.points, b.points);
  double ss = 0.0;
  for (size_t i = 0; i < a.points.size(); ++i)
    ss += norm_sq(r * a.points[i] - b.points[i]);
  return std::sqrt(ss);
}

}  // namespace morphkit
