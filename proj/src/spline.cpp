#include "morphkit/spline.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/errors.hpp"
#include "morphkit/linalg.hpp"

namespace morphkit {
namespace {

// 5-point Gauss-Legendre nodes/weights on [0,1].
constexpr double kGlNode[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                               0.76923465505284155, 0.95308992296933200};
constexpr double kGlWeight[5] = {0.11846344252809454, 0.23931433524968324,
                                 0.28444444444444444, 0.23931433524968324,
                                 0.11846344252809454};

}  // namespace

PeriodicSpline::PeriodicSpline(std::span<const Vec2> pts) {
  const size_t m = pts.size();
  if (m < 4) raise(ErrorCode::too_few_points, "periodic spline needs >= 4 points");

  // Chord-length knots.
  std::vector<double> h(m);  // h[i] = |p[i+1] - p[i]|, wrap at the end
  for (size_t i = 0; i < m; ++i) {
    h[i] = distance(pts[(i + 1) % m], pts[i]);
    if (h[i] <= 0.0)
      raise(ErrorCode::invalid_argument, "consecutive duplicate points in spline input");
  }

  // Periodic cubic spline second derivatives: for each coordinate solve the
  // cyclic tridiagonal system
  //   h[i-1]/6 m[i-1] + (h[i-1]+h[i])/3 m[i] + h[i]/6 m[i+1] = rhs[i].
  std::vector<double> sub(m), diag(m), sup(m), rx(m), ry(m);
  for (size_t i = 0; i < m; ++i) {
    const size_t prev = (i + m - 1) % m;
    sub[i] = h[prev] / 6.0;
    diag[i] = (h[prev] + h[i]) / 3.0;
    sup[i] = h[i] / 6.0;
    const Vec2 dnext = (pts[(i + 1) % m] - pts[i]) / h[i];
    const Vec2 dprev = (pts[i] - pts[prev]) / h[prev];
    rx[i] = dnext.x - dprev.x;
    ry[i] = dnext.y - dprev.y;
  }
  const std::vector<double> mx =
      solve_cyclic_tridiagonal(sub, diag, sup, sub[0], sup[m - 1], rx);
  const std::vector<double> my =
      solve_cyclic_tridiagonal(sub, diag, sup, sub[0], sup[m - 1], ry);

  segs_.resize(m);
  double t = 0.0;
  for (size_t i = 0; i < m; ++i) {
    Seg& s = segs_[i];
    s.t0 = t;
    s.h = h[i];
    s.y0 = pts[i];
    s.y1 = pts[(i + 1) % m];
    s.m0 = {mx[i], my[i]};
    s.m1 = {mx[(i + 1) % m], my[(i + 1) % m]};
    t += h[i];
  }
  period_ = t;

  // Cumulative arc length, 8 Gauss-Legendre slices per segment.
  const int slices = 8;
  arc_t_.reserve(m * slices + 1);
  arc_cum_.reserve(m * slices + 1);
  arc_t_.push_back(0.0);
  arc_cum_.push_back(0.0);
  double acc = 0.0;
  for (const Seg& s : segs_) {
    for (int k = 0; k < slices; ++k) {
      const double a = s.t0 + s.h * k / slices;
      const double w = s.h / slices;
      double len = 0.0;
      for (int g = 0; g < 5; ++g)
        len += kGlWeight[g] * norm(derivative(a + w * kGlNode[g]));
      acc += len * w;
      arc_t_.push_back(a + w);
      arc_cum_.push_back(acc);
    }
  }
}

size_t PeriodicSpline::locate(double t) const {
  // Binary search over segment starts.
  size_t lo = 0, hi = segs_.size();
  while (lo + 1 < hi) {
    const size_t mid = (lo + hi) / 2;
    if (segs_[mid].t0 <= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

Vec2 PeriodicSpline::eval(const Seg& s, double t, bool deriv) const {
  const double a = (s.t0 + s.h) - t;  // distance to segment end
  const double b = t - s.t0;          // distance from segment start
  const double hh = s.h;
  if (!deriv) {
    const double c0 = a * (a * a - hh * hh) / (6.0 * hh);
    const double c1 = b * (b * b - hh * hh) / (6.0 * hh);
    return (a / hh) * s.y0 + (b / hh) * s.y1 + c0 * s.m0 + c1 * s.m1;
  }
  const double c0 = (-3.0 * a * a + hh * hh) / (6.0 * hh);
  const double c1 = (3.0 * b * b - hh * hh) / (6.0 * hh);
  return (s.y1 - s.y0) / hh + c0 * s.m0 + c1 * s.m1;
}

Vec2 PeriodicSpline::position(double t) const {
  double w = std::fmod(t, period_);
  if (w < 0) w += period_;
  const Seg& s = segs_[locate(w)];
  return eval(s, w, false);
}

Vec2 PeriodicSpline::derivative(double t) const {
  double w = std::fmod(t, period_);
  if (w < 0) w += period_;
  const Seg& s = segs_[locate(w)];
  return eval(s, w, true);
}

double PeriodicSpline::param_at_arc_length(double s) const {
  const double total = arc_cum_.back();
  double w = std::fmod(s, total);
  if (w < 0) w += total;

  const auto it = std::upper_bound(arc_cum_.begin(), arc_cum_.end(), w);
  size_t hi = static_cast<size_t>(it - arc_cum_.begin());
  hi = std::min(std::max<size_t>(hi, 1), arc_cum_.size() - 1);
  const size_t lo = hi - 1;

  // Linear seed inside the slice, then Newton on F(t) = arc(t) - w using
  // |c'(t)| as the derivative, with the slice as a safety bracket.
  double t0 = arc_t_[lo], t1 = arc_t_[hi];
  const double s0 = arc_cum_[lo], s1 = arc_cum_[hi];
  double t = t0 + (t1 - t0) * ((w - s0) / std::max(s1 - s0, 1e-300));
  for (int iter = 0; iter < 8; ++iter) {
    // Arc length from t0 to t by 5-point GL on the (small) sub-interval.
    double len = 0.0;
    const double span = t - t0;
    for (int g = 0; g < 5; ++g)
      len += kGlWeight[g] * norm(derivative(t0 + span * kGlNode[g]));
    len *= span;
    const double f = (s0 + len) - w;
    const double speed = norm(derivative(t));
    if (speed <= 0) break;
    const double step = f / speed;
    t -= step;
    if (t < t0) t = 0.5 * (t0 + (t + step));  // fall back toward the bracket
    if (t > t1) t = 0.5 * (t1 + (t + step));
    if (std::abs(step) < 1e-13 * std::max(1.0, period_)) break;
  }
  return t;
}

}  // namespace morphkit
