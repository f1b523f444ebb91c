#pragma once

#include <span>
#include <string>
#include <vector>

#include "morphkit/distmat.hpp"
#include "morphkit/eigenshape.hpp"
#include "morphkit/outline.hpp"

namespace morphkit {

// Parameters of the current embedding: basis order s, mesh size m (grid is
// m x m over the unit square), and coefficient-space Gaussian smoothing
// scale sigma (in cell units).
struct CurrentConfig {
  int order = 2;      // s
  int mesh = 20;      // m
  double sigma = 2.0;

  bool operator==(const CurrentConfig& o) const {
    return order == o.order && mesh == o.mesh && sigma == o.sigma;
  }
};

// Finite coefficient representation of the 1-current of a closed curve:
// line integrals of the tangent field against a tensor-product B-spline
// basis (clamped uniform knots, degree = order) on the mesh, one plane per
// vector component, Gaussian-smoothed across coefficient indices. The basis
// has (mesh + order) functions per axis.
struct CurrentRep {
  std::vector<double> coeff_x, coeff_y;  // (mesh+order)^2 each, row-major
  CurrentConfig config;
  std::string provenance;

  int basis_per_axis() const { return config.mesh + config.order; }
  std::vector<double> flat() const;  // coeff_x followed by coeff_y
};

// The curve is normalized first (centroid at the origin, unit arc length,
// fixed isotropic map into the unit square with a 10% margin), which makes
// the representation translation- and scale-invariant; start-point
// invariance holds because the loop integral does not depend on where the
// traversal begins.
CurrentRep current_representation(const ShapeSample& sample,
                                  const CurrentConfig& config);

// Frobenius distances between coefficient matrices.
DistanceMatrix current_distances(std::span<const CurrentRep> reps);

// PCA over flattened coefficient vectors (same machinery as eigenshapes).
EigenModel current_pca(std::span<const CurrentRep> reps);

// Evaluation of the raw closed-curve invariant: the coefficient sum per
// component equals the integral of the tangent against a constant field,
// which is zero for closed curves.
Vec2 constant_field_response(const CurrentRep& rep);

}  // namespace morphkit
