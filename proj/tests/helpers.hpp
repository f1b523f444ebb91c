#pragma once

// Synthetic shape generators and small utilities shared by the test suites.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "morphkit/image.hpp"
#include "morphkit/outline.hpp"
#include "morphkit/rng.hpp"

namespace testutil {

using morphkit::GrayImage;
using morphkit::Outline;
using morphkit::ShapeSample;
using morphkit::Vec2;

inline constexpr double kPi = std::numbers::pi;

inline ShapeSample make_sample(std::vector<Vec2> pts, std::string id,
                               std::string label = "") {
  ShapeSample s;
  s.points = std::move(pts);
  s.id = std::move(id);
  if (!label.empty()) s.label = std::move(label);
  return s;
}

inline std::vector<Vec2> circle_points(int n, double r = 1.0,
                                       Vec2 center = {0, 0}, double phase = 0) {
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2.0 * kPi * i / n;
    pts[i] = {center.x + r * std::cos(a), center.y + r * std::sin(a)};
  }
  return pts;
}

inline ShapeSample circle_sample(int n, double r = 1.0, Vec2 center = {0, 0},
                                 const std::string& id = "circle") {
  return make_sample(circle_points(n, r, center), id);
}

inline std::vector<Vec2> ellipse_points(int n, double a, double b,
                                        Vec2 center = {0, 0}) {
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    pts[i] = {center.x + a * std::cos(t), center.y + b * std::sin(t)};
  }
  return pts;
}

// Axis-aligned square traversed counter-clockwise with n points spread
// evenly along the perimeter.
inline std::vector<Vec2> square_points(int n, double side = 2.0,
                                       Vec2 center = {0, 0}) {
  std::vector<Vec2> pts;
  pts.reserve(n);
  const double half = side / 2.0;
  const Vec2 corners[4] = {{center.x - half, center.y - half},
                           {center.x + half, center.y - half},
                           {center.x + half, center.y + half},
                           {center.x - half, center.y + half}};
  for (int i = 0; i < n; ++i) {
    const double u = 4.0 * i / n;
    const int edge = static_cast<int>(u) % 4;
    const double f = u - std::floor(u);
    const Vec2 a = corners[edge];
    const Vec2 b = corners[(edge + 1) % 4];
    pts.push_back(a + f * (b - a));
  }
  return pts;
}

// Star polygon: radius oscillates between r0*(1-amp) and r0*(1+amp).
inline std::vector<Vec2> star_points(int n, int spikes = 5, double r0 = 1.0,
                                     double amp = 0.35) {
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    const double r = r0 * (1.0 + amp * std::cos(spikes * t));
    pts[i] = {r * std::cos(t), r * std::sin(t)};
  }
  return pts;
}

// Smooth random blob: radius is a low-order Fourier series in angle.
inline std::vector<Vec2> fourier_blob(int n, morphkit::SplitMix64& rng,
                                      int harmonics = 5, double amp = 0.08) {
  std::vector<double> a(harmonics), phi(harmonics);
  for (int h = 0; h < harmonics; ++h) {
    a[h] = rng.uniform(-amp, amp);
    phi[h] = rng.uniform(0.0, 2.0 * kPi);
  }
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    double r = 1.0;
    for (int h = 0; h < harmonics; ++h) r += a[h] * std::cos((h + 1) * t + phi[h]);
    pts[i] = {r * std::cos(t), r * std::sin(t)};
  }
  return pts;
}

// Soft-edged disk: intensity ramps linearly across one pixel at the rim, so
// the 0.5 level set is the circle itself (a stand-in for a grayscale photo).
inline GrayImage disk_image(int w, int h, double cx, double cy, double r) {
  GrayImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double d = std::hypot(x - cx, y - cy);
      double v = 0.5 + (r - d);
      img.at(x, y) = v < 0 ? 0 : (v > 1 ? 1 : v);
    }
  return img;
}

inline GrayImage binary_rect_image(int w, int h, int x0, int y0, int x1, int y1) {
  GrayImage img;
  img.width = w;
  img.height = h;
  img.pixels.assign(static_cast<size_t>(w) * h, 0.0);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) img.at(x, y) = 1.0;
  return img;
}

inline std::vector<Vec2> rotated(const std::vector<Vec2>& pts, double theta,
                                 Vec2 about = {0, 0}) {
  const morphkit::Mat2 r = morphkit::Mat2::rotation(theta);
  std::vector<Vec2> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) out[i] = about + r * (pts[i] - about);
  return out;
}

inline std::vector<Vec2> translated(const std::vector<Vec2>& pts, Vec2 d) {
  std::vector<Vec2> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) out[i] = pts[i] + d;
  return out;
}

inline std::vector<Vec2> scaled(const std::vector<Vec2>& pts, double s) {
  std::vector<Vec2> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) out[i] = s * pts[i];
  return out;
}

inline std::vector<Vec2> start_shifted(const std::vector<Vec2>& pts, int shift) {
  const int n = static_cast<int>(pts.size());
  std::vector<Vec2> out(pts.size());
  for (int i = 0; i < n; ++i) out[i] = pts[(i + shift) % n];
  return out;
}

}  // namespace testutil
