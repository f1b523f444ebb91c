#include <doctest.h>
#include <json.hpp>
#include <filesystem>

#include "helpers.hpp"
#include "morphkit/errors.hpp"
#include "morphkit/io.hpp"
#include "morphkit/svg.hpp"

using namespace morphkit;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  const fs::path d = fs::temp_directory_path() / "morphkit_io_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("io: shape JSON round trip is byte-exact") {
  SplitMix64 rng(601);
  ShapeSample s = make_sample(fourier_blob(64, rng), "blob", "classA");
  // Awkward doubles on purpose.
  s.points[0] = {1.0 / 3.0, -2.0e-13};
  s.points[1] = {1e17, 0.1};

  const auto p1 = (tmp_dir() / "shape1.json").string();
  const auto p2 = (tmp_dir() / "shape2.json").string();
  write_shape_json(p1, s);
  const ShapeSample back = read_shape_json(p1);
  write_shape_json(p2, back);
  CHECK(read_text_file(p1) == read_text_file(p2));
  CHECK(back.id == s.id);
  REQUIRE(back.label.has_value());
  CHECK(*back.label == "classA");
  REQUIRE(back.n() == s.n());
  for (int i = 0; i < s.n(); ++i) {
    CHECK(back.points[i].x == s.points[i].x);  // exact
    CHECK(back.points[i].y == s.points[i].y);
  }
}

TEST_CASE("io: null label survives the round trip") {
  ShapeSample s = circle_sample(16);
  const auto p = (tmp_dir() / "nolabel.json").string();
  write_shape_json(p, s);
  CHECK_FALSE(read_shape_json(p).label.has_value());
}

TEST_CASE("io: shape CSV round trip") {
  SplitMix64 rng(603);
  const ShapeSample s = make_sample(fourier_blob(40, rng), "csvblob");
  const auto p = (tmp_dir() / "csvblob.csv").string();
  write_shape_csv(p, s);
  const ShapeSample back = read_shape_csv(p);
  CHECK(back.id == "csvblob");
  REQUIRE(back.n() == s.n());
  for (int i = 0; i < s.n(); ++i) {
    CHECK(back.points[i].x == s.points[i].x);
    CHECK(back.points[i].y == s.points[i].y);
  }
}

TEST_CASE("io: distance matrix CSV round trip with provenance") {
  DistanceMatrix dm;
  dm.size = 4;
  dm.ids = {"a", "b", "c", "d"};
  dm.method = "srvf";
  dm.params = {{"seeds", "coarse"}, {"rounds", "3"}};
  dm.entries.assign(16, 0.0);
  SplitMix64 rng(605);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double v = rng.uniform(0.01, 2.0);
      dm.at(i, j) = v;
      dm.at(j, i) = v;
    }
  const auto p = (tmp_dir() / "dist.csv").string();
  write_distmat_csv(p, dm);
  const DistanceMatrix back = read_distmat_csv(p);
  CHECK(back.method == "srvf");
  CHECK(back.params.at("seeds") == "coarse");
  CHECK(back.ids == dm.ids);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(back.at(i, j) == dm.at(i, j));
}

TEST_CASE("io: labels CSV") {
  const std::map<std::string, std::string> labels = {{"s1", "amphora"},
                                                     {"s2", "krater"}};
  const auto p = (tmp_dir() / "labels.csv").string();
  write_labels_csv(p, labels);
  CHECK(read_labels_csv(p) == labels);
}

TEST_CASE("io: eigenmodel JSON round trip") {
  EigenModel m;
  m.mean = {0.5, -1.5, 2.25};
  m.eigenvalues = {3.0, 1.0};
  m.eigenvectors = {{1, 0, 0}, {0, 1, 0}};
  m.n_samples = 7;
  const auto p = (tmp_dir() / "model.json").string();
  write_eigenmodel_json(p, m);
  const EigenModel back = read_eigenmodel_json(p);
  CHECK(back.mean == m.mean);
  CHECK(back.eigenvalues == m.eigenvalues);
  CHECK(back.eigenvectors == m.eigenvectors);
  CHECK(back.n_samples == 7);
}

TEST_CASE("io: current rep CSV + sidecar round trip") {
  SplitMix64 rng(607);
  CurrentRep rep;
  rep.config = CurrentConfig{2, 4, 1.0};
  rep.provenance = "vase42";
  const int nb = rep.basis_per_axis();
  rep.coeff_x.resize(static_cast<size_t>(nb) * nb);
  rep.coeff_y.resize(static_cast<size_t>(nb) * nb);
  for (auto& v : rep.coeff_x) v = rng.uniform(-1, 1);
  for (auto& v : rep.coeff_y) v = rng.uniform(-1, 1);
  const auto p = (tmp_dir() / "rep.csv").string();
  write_current_csv(p, rep);
  const CurrentRep back = read_current_csv(p);
  CHECK(back.provenance == "vase42");
  CHECK(back.config == rep.config);
  CHECK(back.coeff_x == rep.coeff_x);
  CHECK(back.coeff_y == rep.coeff_y);
}

TEST_CASE("io: missing files raise IoError") {
  try {
    read_shape_json((tmp_dir() / "nope.json").string());
    FAIL("expected IoError");
  } catch (const MorphError& e) {
    CHECK(e.code() == ErrorCode::io_error);
  }
}

TEST_CASE("svg: grid output is structurally sound") {
  std::vector<SvgRow> rows(2);
  rows[0].label = "circles";
  rows[0].shapes = {circle_sample(32), circle_sample(32, 0.5)};
  rows[1].label = "squares";
  rows[1].shapes = {make_sample(square_points(32), "sq")};
  const auto p = (tmp_dir() / "grid.svg").string();
  const std::vector<std::string> titles = {"one", "two"};
  write_shape_grid_svg(p, rows, titles);
  const std::string svg = read_text_file(p);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  // 3 shapes -> 3 polygons; 2 row labels + 2 column titles -> 4 texts.
  size_t polygons = 0, texts = 0;
  for (size_t pos = 0; (pos = svg.find("<polygon", pos)) != std::string::npos; ++pos)
    ++polygons;
  for (size_t pos = 0; (pos = svg.find("<text", pos)) != std::string::npos; ++pos)
    ++texts;
  CHECK(polygons == 3);
  CHECK(texts == 4);
}

TEST_CASE("io: lddmm match dump round-trips through JSON parsing") {
  MatchResult m;
  m.distance = 0.25;
  m.residual = 1e-4;
  m.converged = true;
  m.momenta = {0.1, -0.2, 0.3, 0.4};
  m.deformed = circle_sample(8);
  const auto p = (tmp_dir() / "match.json").string();
  write_match_json(p, m, LddmmConfig{});
  const auto j = nlohmann::json::parse(read_text_file(p));
  CHECK(j.at("distance").get<double>() == 0.25);
  CHECK(j.at("momenta").size() == 4);
  CHECK(j.at("deformed").size() == 8);
  CHECK(j.at("timesteps").get<int>() == 20);
}
