#include <atomic>
#include <cmath>
#include <doctest.h>
#include <filesystem>
#include <fstream>

#include "morphkit/distmat.hpp"
#include "morphkit/errors.hpp"

using namespace morphkit;

namespace {

std::vector<std::string> make_ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
  return ids;
}

double pair_value(int i, int j) { return std::abs(i - j) + 0.25 * (i + j); }

}  // namespace

TEST_CASE("distmat: identical results for 1 and 4 workers") {
  const auto ids = make_ids(17);
  auto fn = [](int i, int j) { return pair_value(i, j); };
  DistmatOptions o1, o4;
  o1.jobs = 1;
  o4.jobs = 4;
  const auto a = compute_distance_matrix(ids, fn, "test", {}, o1);
  const auto b = compute_distance_matrix(ids, fn, "test", {}, o4);
  CHECK(a.entries == b.entries);  // bitwise
  validate(a);
}

TEST_CASE("distmat: checkpoint resume skips completed cells") {
  namespace fs = std::filesystem;
  const auto ids = make_ids(12);
  const std::string ckpt =
      (fs::temp_directory_path() / "morphkit_ckpt_test.txt").string();
  fs::remove(ckpt);

  // First run: a pair function that fails partway through leaves the
  // checkpoint behind.
  std::atomic<int> calls{0};
  auto failing = [&](int i, int j) {
    if (calls.fetch_add(1) == 40) throw MorphError(ErrorCode::no_convergence, "boom");
    return pair_value(i, j);
  };
  DistmatOptions opts;
  opts.jobs = 1;
  opts.checkpoint_path = ckpt;
  opts.checkpoint_every = 10;
  CHECK_THROWS_AS(compute_distance_matrix(ids, failing, "test", {}, opts), MorphError);
  REQUIRE(fs::exists(ckpt));

  // Second run resumes: it must not recompute checkpointed cells.
  std::atomic<int> recomputed{0};
  auto counting = [&](int i, int j) {
    recomputed.fetch_add(1);
    return pair_value(i, j);
  };
  const auto dm = compute_distance_matrix(ids, counting, "test", {}, opts);
  CHECK(recomputed.load() < 66);  // 12*11/2 = 66 total cells
  for (int i = 0; i < dm.size; ++i)
    for (int j = i + 1; j < dm.size; ++j)
      CHECK(dm.at(i, j) == doctest::Approx(pair_value(i, j)));
  CHECK_FALSE(fs::exists(ckpt));  // removed after completion
}

TEST_CASE("distmat: checkpoint with a different key is ignored") {
  namespace fs = std::filesystem;
  const auto ids = make_ids(6);
  const std::string ckpt =
      (fs::temp_directory_path() / "morphkit_ckpt_key.txt").string();
  {
    std::ofstream out(ckpt);
    out << "morphkit-distmat-v1 0000000000000000\n0 1 999.0\n";
  }
  DistmatOptions opts;
  opts.jobs = 1;
  opts.checkpoint_path = ckpt;
  const auto dm = compute_distance_matrix(
      ids, [](int i, int j) { return pair_value(i, j); }, "test", {}, opts);
  CHECK(dm.at(0, 1) == doctest::Approx(pair_value(0, 1)));
  fs::remove(ckpt);
}

TEST_CASE("distmat: validate rejects broken matrices") {
  DistanceMatrix dm;
  dm.size = 2;
  dm.ids = {"a", "b"};
  dm.entries = {0.0, 1.0, 2.0, 0.0};  // asymmetric
  CHECK_THROWS_AS(validate(dm), MorphError);
  dm.entries = {0.0, -1.0, -1.0, 0.0};  // negative
  CHECK_THROWS_AS(validate(dm), MorphError);
  dm.entries = {0.5, 1.0, 1.0, 0.0};  // nonzero diagonal
  CHECK_THROWS_AS(validate(dm), MorphError);
}
