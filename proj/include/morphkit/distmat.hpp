#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace morphkit {

// Symmetric pairwise distances with method and parameter provenance.
// Stored full-symmetric; serialized upper-triangular.
struct DistanceMatrix {
  int size = 0;
  std::vector<double> entries;  // size*size, row-major
  std::vector<std::string> ids;
  std::string method;
  std::map<std::string, std::string> params;

  double at(int i, int j) const { return entries[static_cast<size_t>(i) * size + j]; }
  double& at(int i, int j) { return entries[static_cast<size_t>(i) * size + j]; }
};

// Checks symmetry/diagonal/finiteness invariants; throws on violation.
void validate(const DistanceMatrix& dm, double sym_tol = 1e-9);

struct DistmatOptions {
  int jobs = 0;                   // 0 = hardware_concurrency
  std::string checkpoint_path;    // empty = no checkpointing
  int checkpoint_every = 1000;    // cells between checkpoint writes
};

// Fills the upper triangle by calling pair_fn(i, j) for i < j from a bounded
// worker pool and mirrors it. Each cell is written to its own slot exactly
// once, so the result does not depend on the schedule. With a checkpoint
// path, completed cells are flushed periodically and reloaded on resume when
// the provenance key matches.
DistanceMatrix compute_distance_matrix(
    const std::vector<std::string>& ids,
    const std::function<double(int, int)>& pair_fn, const std::string& method,
    const std::map<std::string, std::string>& params,
    const DistmatOptions& opts = {});

}  // namespace morphkit
