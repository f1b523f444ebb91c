#include "morphkit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "morphkit/errors.hpp"
#include "morphkit/rng.hpp"

namespace morphkit {

std::vector<std::string> knn_predict(const DistanceMatrix& dist,
                                     std::span<const LabeledIndex> train,
                                     std::span<const int> test, int k) {
  if (train.empty()) raise(ErrorCode::empty_train, "knn: empty training set");
  if (k < 1 || k > static_cast<int>(train.size()))
    raise(ErrorCode::invalid_argument, "knn: k out of range");
  for (const auto& t : train)
    if (t.index < 0 || t.index >= dist.size)
      raise(ErrorCode::index_out_of_range, "knn: train index out of range");
  for (const int t : test)
    if (t < 0 || t >= dist.size)
      raise(ErrorCode::index_out_of_range, "knn: test index out of range");

  std::vector<std::string> out;
  out.reserve(test.size());
  std::vector<std::pair<double, int>> cand(train.size());  // (distance, train slot)
  for (const int t : test) {
    for (size_t s = 0; s < train.size(); ++s)
      cand[s] = {dist.at(t, train[s].index), static_cast<int>(s)};
    std::stable_sort(cand.begin(), cand.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    // Majority over the k nearest; ties by summed distance, then label order.
    std::map<std::string, std::pair<int, double>> votes;  // label -> (count, sum)
    for (int s = 0; s < k; ++s) {
      auto& v = votes[train[cand[s].second].label];
      v.first += 1;
      v.second += cand[s].first;
    }
    const std::string* best = nullptr;
    int best_count = -1;
    double best_sum = 0.0;
    for (const auto& [label, v] : votes) {
      const bool wins =
          v.first > best_count ||
          (v.first == best_count && v.second < best_sum);
      // std::map iterates labels in sorted order, so on a full tie the
      // lexicographically smallest label is kept.
      if (wins) {
        best = &label;
        best_count = v.first;
        best_sum = v.second;
      }
    }
    out.push_back(*best);
  }
  return out;
}

std::vector<std::vector<int>> confusion(
    std::span<const std::string> truth, std::span<const std::string> predicted,
    std::span<const std::string> class_order) {
  if (truth.size() != predicted.size())
    raise(ErrorCode::length_mismatch, "confusion: length mismatch");
  std::map<std::string, int> pos;
  for (size_t c = 0; c < class_order.size(); ++c)
    pos[class_order[c]] = static_cast<int>(c);
  std::vector<std::vector<int>> m(class_order.size(),
                                  std::vector<int>(class_order.size(), 0));
  for (size_t i = 0; i < truth.size(); ++i) {
    const auto r = pos.find(truth[i]);
    const auto c = pos.find(predicted[i]);
    if (r == pos.end() || c == pos.end())
      raise(ErrorCode::unknown_label, "confusion: label not in class order");
    ++m[r->second][c->second];
  }
  return m;
}

double f1_weighted(std::span<const std::string> truth,
                   std::span<const std::string> predicted) {
  if (truth.size() != predicted.size() || truth.empty())
    raise(ErrorCode::length_mismatch, "f1: length mismatch or empty");
  std::set<std::string> classes(truth.begin(), truth.end());
  classes.insert(predicted.begin(), predicted.end());
  const std::vector<std::string> order(classes.begin(), classes.end());
  const auto m = confusion(truth, predicted, order);

  const size_t c = order.size();
  double weighted = 0.0;
  for (size_t i = 0; i < c; ++i) {
    int row = 0, col = 0;
    for (size_t j = 0; j < c; ++j) {
      row += m[i][j];
      col += m[j][i];
    }
    const int tp = m[i][i];
    const double precision = col > 0 ? static_cast<double>(tp) / col : 0.0;
    const double recall = row > 0 ? static_cast<double>(tp) / row : 0.0;
    const double f1 = (precision + recall) > 0
                          ? 2.0 * precision * recall / (precision + recall)
                          : 0.0;
    weighted += f1 * row;  // support weighting by true-class count
  }
  return weighted / static_cast<double>(truth.size());
}

SplitSpec preset_split(const std::string& dataset) {
  SplitSpec spec;
  if (dataset == "vases")
    spec.train_fraction = 480.0 / 716.0;
  else if (dataset == "leaves")
    spec.train_fraction = 300.0 / 440.0;
  else if (dataset == "shells")
    spec.train_fraction = 120.0 / 235.0;
  else
    raise(ErrorCode::invalid_argument,
          "unknown split preset '" + dataset + "' (vases, leaves, shells)");
  return spec;
}

std::pair<std::vector<LabeledIndex>, std::vector<int>> stratified_split(
    std::span<const LabeledIndex> labels, const SplitSpec& spec,
    uint64_t seed) {
  std::map<std::string, std::vector<int>> by_class;
  for (const auto& li : labels) {
    if (li.label.empty())
      raise(ErrorCode::invalid_argument, "stratified_split: empty label");
    by_class[li.label].push_back(li.index);
  }

  SplitMix64 rng(seed);
  std::vector<LabeledIndex> train;
  std::vector<int> test;
  for (auto& [label, members] : by_class) {
    if (members.size() < 2)
      raise(ErrorCode::class_too_small,
            "class '" + label + "' has fewer than 2 members");
    std::sort(members.begin(), members.end());
    rng.shuffle(members);
    int take = spec.train_per_class > 0
                   ? spec.train_per_class
                   : static_cast<int>(std::lround(spec.train_fraction *
                                                  static_cast<double>(members.size())));
    take = std::clamp(take, 1, static_cast<int>(members.size()) - 1);
    for (size_t i = 0; i < members.size(); ++i) {
      if (static_cast<int>(i) < take)
        train.push_back({members[i], label});
      else
        test.push_back(members[i]);
    }
  }
  std::sort(train.begin(), train.end(),
            [](const LabeledIndex& a, const LabeledIndex& b) {
              return a.index < b.index;
            });
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

EvaluationSummary evaluate(const DistanceMatrix& dist,
                           std::span<const LabeledIndex> labels,
                           const SplitSpec& spec, int k_min, int k_max,
                           int replicates, uint64_t seed) {
  if (k_min < 1 || k_max < k_min)
    raise(ErrorCode::invalid_argument, "evaluate: bad k range");
  if (replicates < 1)
    raise(ErrorCode::invalid_argument, "evaluate: replicates must be >= 1");

  if (labels.empty()) raise(ErrorCode::invalid_argument, "evaluate: no labels");

  EvaluationSummary summary;
  summary.k_min = k_min;
  summary.k_max = k_max;
  summary.replicates = replicates;
  summary.seed = seed;
  summary.degenerate_ci = replicates == 1;

  std::set<std::string> classes;
  for (const auto& li : labels) classes.insert(li.label);
  summary.class_order.assign(classes.begin(), classes.end());

  // Precompute the replicate splits; they are shared across k.
  std::vector<std::pair<std::vector<LabeledIndex>, std::vector<int>>> splits;
  splits.reserve(replicates);
  for (int r = 0; r < replicates; ++r)
    splits.push_back(stratified_split(labels, spec, derive_seed(seed, r)));

  std::map<int, std::string> truth_of;
  for (const auto& li : labels) truth_of[li.index] = li.label;

  const int n_k = k_max - k_min + 1;
  summary.scores.assign(n_k, std::vector<double>(replicates, 0.0));
  for (int kk = 0; kk < n_k; ++kk) {
    const int k = k_min + kk;
    for (int r = 0; r < replicates; ++r) {
      const auto& [train, test] = splits[r];
      if (k > static_cast<int>(train.size())) {
        summary.scores[kk][r] = 0.0;
        continue;
      }
      const auto predicted = knn_predict(dist, train, test, k);
      std::vector<std::string> truth;
      truth.reserve(test.size());
      for (const int t : test) truth.push_back(truth_of.at(t));
      summary.scores[kk][r] = f1_weighted(truth, predicted);
    }
  }

  summary.per_k.resize(n_k);
  for (int kk = 0; kk < n_k; ++kk) {
    KStats& st = summary.per_k[kk];
    st.k = k_min + kk;
    double mean = 0.0;
    for (const double v : summary.scores[kk]) mean += v;
    mean /= replicates;
    double var = 0.0;
    for (const double v : summary.scores[kk]) var += (v - mean) * (v - mean);
    st.mean_f1 = mean;
    st.std_f1 = replicates > 1 ? std::sqrt(var / (replicates - 1)) : 0.0;
    st.ci95 = 1.96 * st.std_f1 / std::sqrt(static_cast<double>(replicates));
    if (kk == 0 || st.mean_f1 > summary.best_mean_f1) {
      summary.best_k = st.k;
      summary.best_mean_f1 = st.mean_f1;
    }
  }

  // Confusion of the best run: best k, then highest-F1 replicate.
  const int bk = summary.best_k - k_min;
  int br = 0;
  for (int r = 1; r < replicates; ++r)
    if (summary.scores[bk][r] > summary.scores[bk][br]) br = r;
  summary.best_replicate = br;
  {
    const auto& [train, test] = splits[br];
    const auto predicted = knn_predict(dist, train, test, summary.best_k);
    std::vector<std::string> truth;
    for (const int t : test) truth.push_back(truth_of.at(t));
    summary.best_confusion = confusion(truth, predicted, summary.class_order);
  }
  return summary;
}

}  // namespace morphkit
