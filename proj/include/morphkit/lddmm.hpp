#pragma once

#include <span>
#include <vector>

#include "morphkit/distmat.hpp"
#include "morphkit/outline.hpp"

namespace morphkit {

struct LddmmConfig {
  double kernel_width = 0.5;  // Gaussian scale, in units of unit shape size
  double lambda = 10.0;       // data-attachment weight
  int timesteps = 20;
  int max_iters = 200;
  double grad_tol = 1e-6;
};

// Momenta parameterize a time-discretized flow: points move by forward Euler
//   x_{t+1,i} = x_{t,i} + dt * sum_j K(x_{t,i}, x_{t,j}) p_{t,j},
// with K Gaussian. The objective is kinetic energy plus lambda times the
// squared endpoint mismatch; gradients come from the adjoint recursion
// through the Euler steps.
struct MatchResult {
  double distance = 0.0;  // sqrt of the accumulated kinetic energy
  double residual = 0.0;  // endpoint mismatch norm
  std::vector<double> momenta;  // T * N * 2, (t, i, [x then y]) order
  ShapeSample deformed;
  bool converged = false;
  std::vector<double> energy_history;    // accepted-step energies, decreasing
  std::vector<double> distance_history;  // sqrt(kinetic) per accepted step
};

MatchResult lddmm_match(const ShapeSample& src, const ShapeSample& dst,
                        const LddmmConfig& config);

// Objective value for given momenta (flattened as in MatchResult), exposed
// for gradient checking.
double lddmm_energy(const ShapeSample& src, const ShapeSample& dst,
                    const LddmmConfig& config, std::span<const double> momenta);
// Analytic gradient of lddmm_energy with respect to the momenta.
std::vector<double> lddmm_gradient(const ShapeSample& src,
                                   const ShapeSample& dst,
                                   const LddmmConfig& config,
                                   std::span<const double> momenta);

struct LddmmMatrixOptions {
  bool bidirectional = false;  // average i->j and j->i; slower
  DistmatOptions distmat;
};

// Pairwise matching distances; symmetrized by mirroring (or averaging both
// directions when requested). Per-cell non-convergence is counted in the
// params provenance rather than thrown.
DistanceMatrix lddmm_distances(std::span<const PreShape> samples,
                               const LddmmConfig& config,
                               const LddmmMatrixOptions& opts = {});

}  // namespace morphkit
