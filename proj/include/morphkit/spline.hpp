#pragma once

#include <span>
#include <vector>

#include "morphkit/geometry.hpp"

namespace morphkit {

// Closed (periodic) cubic spline through a sequence of points, chord-length
// parameterized. Provides position/derivative evaluation and an arc-length
// inverse accurate enough for equal-arc resampling (~1e-9 relative).
class PeriodicSpline {
 public:
  explicit PeriodicSpline(std::span<const Vec2> pts);  // needs >= 4 points

  double period() const { return period_; }
  double total_arc_length() const { return arc_cum_.back(); }

  Vec2 position(double t) const;    // t taken modulo the period
  Vec2 derivative(double t) const;

  // Parameter t with arc length s from the curve start (s modulo total).
  double param_at_arc_length(double s) const;

 private:
  struct Seg {
    double t0, h;      // parameter start and width
    Vec2 y0, y1;       // endpoint values
    Vec2 m0, m1;       // endpoint second derivatives
  };

  size_t locate(double t) const;
  Vec2 eval(const Seg& s, double t, bool deriv) const;

  std::vector<Seg> segs_;
  double period_ = 0.0;
  // Dense cumulative arc-length table at sub-segment boundaries.
  std::vector<double> arc_t_;
  std::vector<double> arc_cum_;
};

}  // namespace morphkit
