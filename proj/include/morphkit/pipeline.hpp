#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "morphkit/classify.hpp"
#include "morphkit/currents.hpp"
#include "morphkit/distmat.hpp"
#include "morphkit/eigenshape.hpp"
#include "morphkit/lddmm.hpp"
#include "morphkit/outline.hpp"
#include "morphkit/srvf.hpp"

namespace morphkit {

// Dataset bookkeeping: where the shapes live and how to preprocess them.
struct DatasetManifest {
  std::string name;
  std::vector<std::pair<std::string, std::string>> shapes;  // (path, label)
  int n_points = 100;
  bool symmetrize = false;
  double threshold = 0.5;
};

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const DatasetManifest& m);
// All paths resolvable, labels non-empty. Throws on violation.
void validate_manifest(const DatasetManifest& m);

enum class Method { eigen, srvf, gc, lddmm };
Method method_from_string(const std::string& s);
const char* to_string(Method m);

struct MethodParams {
  double variance = 0.999;        // eigen
  RegistrationOptions srvf;       // srvf
  CurrentConfig gc;               // gc
  LddmmConfig lddmm;              // lddmm
  bool lddmm_bidirectional = false;

  std::map<std::string, std::string> as_map(Method m) const;
};

// Loads one entry: images go through contour extraction (threshold,
// optional symmetrization); outline/shape files are read directly. Every
// shape is spline-resampled to n_points.
ShapeSample load_shape_entry(const std::string& path, const std::string& label,
                             const DatasetManifest& m);
std::vector<ShapeSample> load_dataset(const DatasetManifest& m);

// Dispatch to the per-method distance computation. Pre-alignment (GPA) is
// applied for eigen and lddmm; srvf and gc work on raw samples.
DistanceMatrix method_distances(Method method, const MethodParams& params,
                                std::span<const ShapeSample> shapes,
                                int jobs = 0,
                                const std::string& checkpoint_path = {});

struct PipelineParams {
  Method method = Method::eigen;
  MethodParams mp;
  int k_min = 3, k_max = 12;
  int replicates = 100;
  uint64_t seed = 42;
  SplitSpec split;
  int jobs = 0;
  std::string outdir;
  bool use_cache = true;
};

struct PipelineResult {
  std::string shapes_dir, dist_csv, report_json;
  std::vector<ShapeSample> shapes;
  DistanceMatrix dist;
  EvaluationSummary summary;
};

// ingest -> resample -> (align) -> distmat -> evaluate, with artifacts and
// provenance on disk. Distance matrices are cached by a content key and
// checkpointed during computation, so interrupted runs resume.
PipelineResult run_pipeline(const DatasetManifest& m, const PipelineParams& p);

struct SweepSpec {
  Method method = Method::eigen;
  std::vector<double> variances;                 // eigen
  std::vector<int> orders, meshes;               // gc
  std::vector<double> sigmas;                    // gc
  std::vector<double> kernel_widths, lambdas;    // lddmm

  // Paper-range defaults: variance 0.75..0.999; s, sigma in 1..4 and
  // mesh in {16, 20, 24}; a small kernel/lambda grid for lddmm.
  static SweepSpec defaults(Method m);
  std::vector<MethodParams> grid() const;
};

struct SweepRow {
  std::map<std::string, std::string> params;
  double mean_f1 = 0.0;
  double ci95 = 0.0;
  int best_k = 0;
  std::string error;  // non-empty when this grid point failed
};

// Evaluate per grid point; rows sorted by mean F1 descending.
std::vector<SweepRow> sweep(const DatasetManifest& m, const SweepSpec& spec,
                            const PipelineParams& base);
void write_sweep_csv(const std::string& path, std::span<const SweepRow> rows);

// One row per shape: id, label, PC1..PCdims.
void export_embedding(const std::string& path, const EigenModel& model,
                      const std::vector<std::vector<double>>& vectors,
                      const std::vector<std::string>& ids,
                      const std::vector<std::string>& labels, int dims = 3);

struct ClassMeans {
  std::string label;
  ShapeSample linear;   // coordinate mean of Procrustes-aligned pre-shapes
  ShapeSample karcher;  // intrinsic mean from the SRVF module
  bool karcher_converged = true;
};

std::vector<ClassMeans> class_means(std::span<const ShapeSample> shapes);
void export_means_svg(const std::string& path, std::span<const ClassMeans> means);

}  // namespace morphkit
