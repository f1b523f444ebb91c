#pragma once

#include <span>
#include <string>
#include <vector>

#include "morphkit/outline.hpp"

namespace morphkit {

// Square-root velocity representation of a closed curve, unit L2 norm
// (pre-shape sphere). Samples live at the segment midpoints of the source
// polyline, so the transform and its inverse are exact inverses of each
// other on polyline data.
struct SrvfCurve {
  std::vector<double> x, y;
  std::string provenance;

  int n() const { return static_cast<int>(x.size()); }
};

// Alignment of curve b onto curve a found during distance computation:
//   aligned_b(t) = rotation * b_shifted(warp(t)) * sqrt(warp'(t)),
// where b_shifted starts seed_shift samples into b. warp holds N+1 values of
// a non-decreasing map of [0,1] onto itself.
struct Registration {
  Mat2 rotation = Mat2::identity();
  int seed_shift = 0;
  std::vector<double> warp;
};

struct RegistrationOptions {
  enum class Seeds { coarse, all, none };
  Seeds seeds = Seeds::coarse;
  bool rotation = true;
  bool warp = true;
  int rounds = 3;           // rotation <-> warp alternations
  bool bidirectional = true;  // search both directions, keep the minimum
};

struct SrvfDistanceResult {
  double distance = 0.0;  // in [0, pi]
  Registration registration;  // always describes b aligned onto a
};

SrvfCurve to_srvf(const ShapeSample& sample);

// Reconstructs a curve from its SRVF: integrate q|q|, scale, place the first
// point at anchor, and remove the linear closure drift.
ShapeSample srvf_inverse(const SrvfCurve& q, double scale, Vec2 anchor);

// Geodesic (great-circle) distance on the pre-shape sphere after optimizing
// rotation, start point and reparameterization of b.
SrvfDistanceResult srvf_distance(const SrvfCurve& a, const SrvfCurve& b,
                                 const RegistrationOptions& opts = {});
inline SrvfDistanceResult srvf_distance(const ShapeSample& a,
                                        const ShapeSample& b,
                                        const RegistrationOptions& opts = {}) {
  return srvf_distance(to_srvf(a), to_srvf(b), opts);
}

// Applies a registration to the sample domain: start-point shift, rotation
// about the centroid, and reparameterization of the closed polyline.
ShapeSample apply_registration(const ShapeSample& b, const Registration& reg);

struct GeodesicPath {
  int steps = 0;                    // kappa
  std::vector<ShapeSample> shapes;  // kappa + 1 entries, source to target
  double energy = 0.0;              // sum of consecutive aligned distances
};

// Registers b to a, then interpolates along the great circle between the
// SRVFs, mapping each waypoint back through srvf_inverse with linearly
// interpolated scale and anchor.
GeodesicPath geodesic_path(const ShapeSample& a, const ShapeSample& b,
                           int steps, const RegistrationOptions& opts = {});

struct KarcherResult {
  ShapeSample mean;
  bool converged = false;
  int iterations = 0;
  double tangent_norm = 0.0;
};

// Intrinsic mean on the pre-shape sphere: repeatedly register every curve to
// the current mean, average the log-map tangents and step halfway along the
// exponential map. Non-convergence is reported via the flag, not thrown.
KarcherResult karcher_mean(std::span<const ShapeSample> samples,
                           double tol = 1e-6, int max_iter = 50,
                           const RegistrationOptions& opts = {});

// Sum of fully registered SRVF distances between consecutive shapes.
double path_energy(std::span<const ShapeSample> shapes,
                   const RegistrationOptions& opts = {});

}  // namespace morphkit
