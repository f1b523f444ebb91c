#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "morphkit/distmat.hpp"

namespace morphkit {

struct LabeledIndex {
  int index = 0;
  std::string label;
};

// k-NN on a precomputed distance matrix. Neighbor ties at the k-th distance
// keep the lower index (stable sort); class ties are broken by smallest
// summed distance among the tied classes, then by lexicographically smallest
// label.
std::vector<std::string> knn_predict(const DistanceMatrix& dist,
                                     std::span<const LabeledIndex> train,
                                     std::span<const int> test, int k);

// Support-weighted mean of per-class F1 (per-class F1 is 0 when P + R = 0).
double f1_weighted(std::span<const std::string> truth,
                   std::span<const std::string> predicted);

// Confusion counts; rows = truth, columns = predicted, in class_order.
std::vector<std::vector<int>> confusion(
    std::span<const std::string> truth, std::span<const std::string> predicted,
    std::span<const std::string> class_order);

// Per-class train allocation: either a fraction of each class or an absolute
// per-class count. Classes are processed in sorted label order and shuffled
// with the documented splitmix64 generator, so a (spec, seed) pair yields
// the same split everywhere.
struct SplitSpec {
  double train_fraction = 0.5;
  int train_per_class = 0;  // used when > 0, overrides the fraction
};

// Dataset presets reproducing the published train:test ratios
// (vases 480:236, leaves 300:140, shells 120:115) as per-class fractions.
SplitSpec preset_split(const std::string& dataset);

std::pair<std::vector<LabeledIndex>, std::vector<int>> stratified_split(
    std::span<const LabeledIndex> labels, const SplitSpec& spec, uint64_t seed);

struct KStats {
  int k = 0;
  double mean_f1 = 0.0;
  double std_f1 = 0.0;
  double ci95 = 0.0;  // 1.96 * std / sqrt(replicates)
};

struct EvaluationSummary {
  std::vector<KStats> per_k;
  std::vector<std::vector<double>> scores;  // [k - k_min][replicate]
  int k_min = 0, k_max = 0;
  int best_k = 0;
  double best_mean_f1 = 0.0;
  int replicates = 0;
  uint64_t seed = 0;
  bool degenerate_ci = false;  // replicates == 1
  // Confusion of the best run: best k, then the replicate with the highest
  // F1 (lowest replicate index on ties).
  std::vector<std::string> class_order;
  std::vector<std::vector<int>> best_confusion;
  int best_replicate = 0;
};

// Runs knn_predict + f1_weighted over `replicates` seeded stratified splits
// for every k in [k_min, k_max]. The same splits are reused across k.
EvaluationSummary evaluate(const DistanceMatrix& dist,
                           std::span<const LabeledIndex> labels,
                           const SplitSpec& spec, int k_min, int k_max,
                           int replicates, uint64_t seed);

}  // namespace morphkit
