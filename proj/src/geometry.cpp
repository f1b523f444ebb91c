#include "morphkit/geometry.hpp"

#include <algorithm>
#include <limits>

namespace morphkit {

double polygon_signed_area(std::span<const Vec2> pts) {
  const size_t n = pts.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[(i + 1) % n];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

double polygon_perimeter(std::span<const Vec2> pts) {
  const size_t n = pts.size();
  if (n < 2) return 0.0;
  double len = 0.0;
  for (size_t i = 0; i < n; ++i) len += distance(pts[i], pts[(i + 1) % n]);
  return len;
}

double polyline_length(std::span<const Vec2> pts) {
  double len = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) len += distance(pts[i], pts[i + 1]);
  return len;
}

Vec2 point_mean(std::span<const Vec2> pts) {
  Vec2 m;
  if (pts.empty()) return m;
  for (const Vec2 p : pts) m += p;
  return m / static_cast<double>(pts.size());
}

double centroid_size(std::span<const Vec2> pts) {
  const Vec2 m = point_mean(pts);
  double s = 0.0;
  for (const Vec2 p : pts) s += norm_sq(p - m);
  return std::sqrt(s);
}

Vec2 interp_closed(std::span<const Vec2> pts, double u) {
  const size_t n = pts.size();
  if (n == 1) return pts[0];
  double w = std::fmod(u, static_cast<double>(n));
  if (w < 0) w += static_cast<double>(n);
  const size_t i = std::min(static_cast<size_t>(w), n - 1);
  const double f = w - static_cast<double>(i);
  const Vec2 a = pts[i];
  const Vec2 b = pts[(i + 1) % n];
  return a + f * (b - a);
}

double hausdorff(std::span<const Vec2> a, std::span<const Vec2> b) {
  auto directed = [](std::span<const Vec2> p, std::span<const Vec2> q) {
    double worst = 0.0;
    for (const Vec2 x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2 y : q) best = std::min(best, norm_sq(x - y));
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace morphkit
