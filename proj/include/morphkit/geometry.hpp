#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace morphkit {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm_sq(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm_sq(a)); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Row-major 2x2 matrix [[m00 m01], [m10 m11]].
struct Mat2 {
  double m00 = 1.0, m01 = 0.0;
  double m10 = 0.0, m11 = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
  }
};

inline Vec2 operator*(const Mat2& m, Vec2 v) {
  return {m.m00 * v.x + m.m01 * v.y, m.m10 * v.x + m.m11 * v.y};
}
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}
inline Mat2 transpose(const Mat2& m) { return {m.m00, m.m10, m.m01, m.m11}; }
inline double det(const Mat2& m) { return m.m00 * m.m11 - m.m01 * m.m10; }

// Closed-polygon helpers. Points are vertices of a closed polyline; the edge
// from the last vertex back to the first is implicit.
double polygon_signed_area(std::span<const Vec2> pts);
double polygon_perimeter(std::span<const Vec2> pts);
double polyline_length(std::span<const Vec2> pts);  // open: no closing edge
Vec2 point_mean(std::span<const Vec2> pts);
// Root-sum-of-squares of coordinates about the point mean.
double centroid_size(std::span<const Vec2> pts);

// Linear interpolation along the closed polyline at fractional vertex index u
// (periodic; u in vertex units, may be any real).
Vec2 interp_closed(std::span<const Vec2> pts, double u);

// Symmetric Hausdorff distance between two point sets (vertex-to-vertex).
double hausdorff(std::span<const Vec2> a, std::span<const Vec2> b);

}  // namespace morphkit
