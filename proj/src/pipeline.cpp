#include "morphkit/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "morphkit/contour.hpp"
#include "morphkit/errors.hpp"
#include "morphkit/image.hpp"
#include "morphkit/io.hpp"
#include "morphkit/procrustes.hpp"
#include "morphkit/svg.hpp"
#include "morphkit/version.hpp"

namespace fs = std::filesystem;

namespace morphkit {

using nlohmann::json;

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    raise(ErrorCode::parse_error, path + ": " + e.what());
  }
  DatasetManifest m;
  try {
    m.name = j.at("name").get<std::string>();
    m.n_points = j.value("n_points", 100);
    m.symmetrize = j.value("symmetrize", false);
    m.threshold = j.value("threshold", 0.5);
    const fs::path base = fs::path(path).parent_path();
    for (const auto& e : j.at("shapes")) {
      std::string p = e.at("path").get<std::string>();
      if (!fs::path(p).is_absolute()) p = (base / p).string();
      m.shapes.emplace_back(p, e.at("label").get<std::string>());
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::parse_error, path + ": " + e.what());
  }
  return m;
}

void save_manifest(const std::string& path, const DatasetManifest& m) {
  json j;
  j["name"] = m.name;
  j["n_points"] = m.n_points;
  j["symmetrize"] = m.symmetrize;
  j["threshold"] = m.threshold;
  json shapes = json::array();
  for (const auto& [p, label] : m.shapes)
    shapes.push_back({{"path", p}, {"label", label}});
  j["shapes"] = std::move(shapes);
  write_text_file(path, j.dump(2) + "\n");
}

void validate_manifest(const DatasetManifest& m) {
  if (m.shapes.empty()) raise(ErrorCode::invalid_argument, "manifest has no shapes");
  if (m.n_points < 8) raise(ErrorCode::invalid_argument, "manifest n_points < 8");
  for (const auto& [path, label] : m.shapes) {
    if (label.empty())
      raise(ErrorCode::invalid_argument, "manifest entry with empty label: " + path);
    if (!fs::exists(path))
      raise(ErrorCode::io_error, "manifest path not resolvable: " + path);
  }
}

Method method_from_string(const std::string& s) {
  if (s == "eigen") return Method::eigen;
  if (s == "srvf") return Method::srvf;
  if (s == "gc") return Method::gc;
  if (s == "lddmm") return Method::lddmm;
  raise(ErrorCode::invalid_argument, "unknown method '" + s + "'");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::eigen: return "eigen";
    case Method::srvf: return "srvf";
    case Method::gc: return "gc";
    case Method::lddmm: return "lddmm";
  }
  return "?";
}

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::map<std::string, std::string> MethodParams::as_map(Method m) const {
  switch (m) {
    case Method::eigen:
      return {{"variance", fmt_num(variance)}};
    case Method::srvf:
      return {{"seeds", srvf.seeds == RegistrationOptions::Seeds::all
                            ? "all"
                            : (srvf.seeds == RegistrationOptions::Seeds::none
                                   ? "none"
                                   : "coarse")},
              {"rounds", std::to_string(srvf.rounds)}};
    case Method::gc:
      return {{"s", std::to_string(gc.order)},
              {"mesh", std::to_string(gc.mesh)},
              {"sigma", fmt_num(gc.sigma)}};
    case Method::lddmm:
      return {{"kernel_width", fmt_num(lddmm.kernel_width)},
              {"lambda", fmt_num(lddmm.lambda)},
              {"timesteps", std::to_string(lddmm.timesteps)},
              {"bidirectional", lddmm_bidirectional ? "1" : "0"}};
  }
  return {};
}

ShapeSample load_shape_entry(const std::string& path, const std::string& label,
                             const DatasetManifest& m) {
  const std::string ext = fs::path(path).extension().string();
  Outline outline;
  if (ext == ".pgm" || ext == ".pnm" || ext == ".png") {
    const GrayImage img = read_image(path);
    outline = extract_contour(img, m.threshold, fs::path(path).stem().string());
    if (m.symmetrize) outline = symmetrize_vertical(outline);
  } else {
    const ShapeSample raw = read_shape_any(path);
    outline = outline_from_sample(raw);
    if (m.symmetrize) outline = symmetrize_vertical(outline);
  }
  ShapeSample s = resample(outline, m.n_points);
  s.id = fs::path(path).stem().string();
  s.label = label;
  return s;
}

std::vector<ShapeSample> load_dataset(const DatasetManifest& m) {
  validate_manifest(m);
  std::vector<ShapeSample> out;
  out.reserve(m.shapes.size());
  for (const auto& [path, label] : m.shapes) {
    try {
      out.push_back(load_shape_entry(path, label, m));
    } catch (const MorphError& e) {
      raise(e.code(), std::string(e.what()) + " (while loading " + path + ")");
    }
  }
  return out;
}

DistanceMatrix method_distances(Method method, const MethodParams& params,
                                std::span<const ShapeSample> shapes,
                                int jobs, const std::string& checkpoint_path) {
  switch (method) {
    case Method::eigen: {
      const auto pre = procrustes_align(shapes);
      const EigenModel model = fit_pca(pre);
      const EigenConfig cfg = select_dims(model, params.variance);
      return eigen_distances(model, cfg, pre);
    }
    case Method::gc: {
      std::vector<CurrentRep> reps;
      reps.reserve(shapes.size());
      for (const auto& s : shapes) reps.push_back(current_representation(s, params.gc));
      return current_distances(reps);
    }
    case Method::srvf: {
      std::vector<SrvfCurve> qs;
      qs.reserve(shapes.size());
      std::vector<std::string> ids;
      for (const auto& s : shapes) {
        qs.push_back(to_srvf(s));
        ids.push_back(s.id);
      }
      DistmatOptions dopts;
      dopts.jobs = jobs;
      dopts.checkpoint_path = checkpoint_path;
      auto pair_fn = [&qs, &params](int i, int j) {
        return srvf_distance(qs[i], qs[j], params.srvf).distance;
      };
      return compute_distance_matrix(ids, pair_fn, "srvf",
                                     params.as_map(Method::srvf), dopts);
    }
    case Method::lddmm: {
      const auto pre = procrustes_align(shapes);
      LddmmMatrixOptions lopts;
      lopts.bidirectional = params.lddmm_bidirectional;
      lopts.distmat.jobs = jobs;
      lopts.distmat.checkpoint_path = checkpoint_path;
      return lddmm_distances(pre, params.lddmm, lopts);
    }
  }
  raise(ErrorCode::invalid_argument, "unhandled method");
}

namespace {

std::string dataset_hash(std::span<const ShapeSample> shapes) {
  std::ostringstream ss;
  ss.precision(17);
  for (const auto& s : shapes) {
    ss << s.id << ";" << (s.label ? *s.label : "") << ";";
    for (const Vec2 p : s.points) ss << p.x << "," << p.y << ";";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(ss.str())));
  return buf;
}

}  // namespace

PipelineResult run_pipeline(const DatasetManifest& m, const PipelineParams& p) {
  if (p.outdir.empty()) raise(ErrorCode::invalid_argument, "no output directory");
  fs::create_directories(p.outdir);
  const fs::path out(p.outdir);

  PipelineResult res;
  res.shapes = load_dataset(m);

  // Persist resampled shapes.
  const fs::path shapes_dir = out / "shapes";
  fs::create_directories(shapes_dir);
  for (const auto& s : res.shapes)
    write_shape_json((shapes_dir / (s.id + ".json")).string(), s);
  res.shapes_dir = shapes_dir.string();

  // Distance matrix, cached by (dataset, method, params) content key.
  const std::string dhash = dataset_hash(res.shapes);
  std::ostringstream keyss;
  keyss << to_string(p.method) << "-" << dhash;
  for (const auto& [k, v] : p.mp.as_map(p.method)) keyss << "-" << k << "=" << v;
  const std::string key = std::to_string(fnv1a(keyss.str()));
  const fs::path cache_dir = out / "cache";
  fs::create_directories(cache_dir);
  const fs::path cache_file = cache_dir / ("dist-" + key + ".csv");

  if (p.use_cache && fs::exists(cache_file)) {
    res.dist = read_distmat_csv(cache_file.string());
  } else {
    res.dist = method_distances(p.method, p.mp, res.shapes, p.jobs,
                                (cache_file.string() + ".part"));
    write_distmat_csv(cache_file.string(), res.dist);
  }
  res.dist_csv = (out / "dist.csv").string();
  write_distmat_csv(res.dist_csv, res.dist);

  // Labels and evaluation.
  std::vector<LabeledIndex> labels;
  for (size_t i = 0; i < res.shapes.size(); ++i)
    labels.push_back({static_cast<int>(i),
                      res.shapes[i].label ? *res.shapes[i].label : ""});
  res.summary = evaluate(res.dist, labels, p.split, p.k_min, p.k_max,
                         p.replicates, p.seed);

  std::map<std::string, std::string> prov = p.mp.as_map(p.method);
  prov["method"] = to_string(p.method);
  prov["tool_version"] = kVersion;
  prov["dataset"] = m.name;
  prov["dataset_hash"] = dhash;
  prov["n_points"] = std::to_string(m.n_points);
  prov["train_fraction"] = fmt_num(p.split.train_fraction);
  if (p.split.train_per_class > 0)
    prov["train_per_class"] = std::to_string(p.split.train_per_class);

  res.report_json = (out / "report.json").string();
  write_report_json(res.report_json, res.summary, prov);
  return res;
}

SweepSpec SweepSpec::defaults(Method m) {
  SweepSpec s;
  s.method = m;
  switch (m) {
    case Method::eigen:
      s.variances = {0.75, 0.9, 0.95, 0.99, 0.999};
      break;
    case Method::gc:
      s.orders = {1, 2, 3, 4};
      s.sigmas = {1.0, 2.0, 3.0, 4.0};
      s.meshes = {16, 20, 24};
      break;
    case Method::lddmm:
      s.kernel_widths = {0.25, 0.5, 1.0};
      s.lambdas = {1.0, 10.0, 100.0};
      break;
    case Method::srvf:
      break;  // registration handles its own parameters
  }
  return s;
}

std::vector<MethodParams> SweepSpec::grid() const {
  std::vector<MethodParams> out;
  switch (method) {
    case Method::eigen:
      for (const double v : variances) {
        MethodParams mp;
        mp.variance = v;
        out.push_back(mp);
      }
      break;
    case Method::gc:
      for (const int s : orders)
        for (const double sg : sigmas)
          for (const int m : meshes) {
            MethodParams mp;
            mp.gc = CurrentConfig{s, m, sg};
            out.push_back(mp);
          }
      break;
    case Method::lddmm:
      for (const double w : kernel_widths)
        for (const double l : lambdas) {
          MethodParams mp;
          mp.lddmm.kernel_width = w;
          mp.lddmm.lambda = l;
          out.push_back(mp);
        }
      break;
    case Method::srvf: {
      out.emplace_back();
      break;
    }
  }
  if (out.empty()) raise(ErrorCode::invalid_argument, "empty sweep grid");
  return out;
}

std::vector<SweepRow> sweep(const DatasetManifest& m, const SweepSpec& spec,
                            const PipelineParams& base) {
  const std::vector<ShapeSample> shapes = load_dataset(m);
  std::vector<LabeledIndex> labels;
  for (size_t i = 0; i < shapes.size(); ++i)
    labels.push_back({static_cast<int>(i),
                      shapes[i].label ? *shapes[i].label : ""});

  std::vector<SweepRow> rows;
  for (const MethodParams& mp : spec.grid()) {
    SweepRow row;
    row.params = mp.as_map(spec.method);
    try {
      const DistanceMatrix dm =
          method_distances(spec.method, mp, shapes, base.jobs);
      const EvaluationSummary s = evaluate(dm, labels, base.split, base.k_min,
                                           base.k_max, base.replicates, base.seed);
      row.mean_f1 = s.best_mean_f1;
      row.best_k = s.best_k;
      for (const auto& st : s.per_k)
        if (st.k == s.best_k) row.ci95 = st.ci95;
    } catch (const MorphError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.error.empty() != b.error.empty()) return a.error.empty();
    return a.mean_f1 > b.mean_f1;
  });
  return rows;
}

void write_sweep_csv(const std::string& path, std::span<const SweepRow> rows) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  out << "rank,params,mean_f1,ci95,best_k,error\n";
  int rank = 1;
  out.precision(17);
  for (const auto& r : rows) {
    std::string params;
    for (const auto& [k, v] : r.params) {
      if (!params.empty()) params += ";";
      params += k + "=" + v;
    }
    out << rank++ << "," << params << "," << r.mean_f1 << "," << r.ci95 << ","
        << r.best_k << "," << r.error << "\n";
  }
}

void export_embedding(const std::string& path, const EigenModel& model,
                      const std::vector<std::vector<double>>& vectors,
                      const std::vector<std::string>& ids,
                      const std::vector<std::string>& labels, int dims) {
  if (dims < 1 || dims > model.n_components())
    raise(ErrorCode::dims_exceed_model, "embedding dims exceed the model");
  if (vectors.size() != ids.size() || ids.size() != labels.size())
    raise(ErrorCode::length_mismatch, "embedding inputs disagree in length");
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  out << "id,label";
  for (int d = 1; d <= dims; ++d) out << ",PC" << d;
  out << "\n";
  out.precision(17);
  for (size_t i = 0; i < vectors.size(); ++i) {
    const auto scores = project(model, vectors[i], dims);
    out << ids[i] << "," << labels[i];
    for (const double s : scores) out << "," << s;
    out << "\n";
  }
}

std::vector<ClassMeans> class_means(std::span<const ShapeSample> shapes) {
  std::map<std::string, std::vector<ShapeSample>> by_class;
  for (const auto& s : shapes)
    by_class[s.label ? *s.label : "unlabeled"].push_back(s);

  std::vector<ClassMeans> out;
  for (auto& [label, members] : by_class) {
    ClassMeans cm;
    cm.label = label;

    const auto pre = procrustes_align(members);
    const size_t n = pre[0].points.size();
    cm.linear.id = label + "_linear_mean";
    cm.linear.label = label;
    cm.linear.points.assign(n, Vec2{});
    for (const auto& p : pre)
      for (size_t i = 0; i < n; ++i) cm.linear.points[i] += p.points[i];
    for (Vec2& v : cm.linear.points) v = v / static_cast<double>(pre.size());

    const KarcherResult kr = karcher_mean(members);
    cm.karcher = kr.mean;
    cm.karcher.id = label + "_karcher_mean";
    cm.karcher.label = label;
    cm.karcher_converged = kr.converged;
    out.push_back(std::move(cm));
  }
  return out;
}

void export_means_svg(const std::string& path,
                      std::span<const ClassMeans> means) {
  std::vector<SvgRow> rows;
  for (const auto& cm : means) {
    SvgRow row;
    row.label = cm.label;
    // Normalize both means to unit centroid size for a fair visual pairing.
    auto normalized = [](const ShapeSample& s) {
      ShapeSample out = s;
      const Vec2 c = point_mean(out.points);
      double ss = 0.0;
      for (const Vec2 p : out.points) ss += norm_sq(p - c);
      const double size = std::sqrt(ss);
      for (Vec2& p : out.points) p = (p - c) / (size > 0 ? size : 1.0);
      return out;
    };
    row.shapes = {normalized(cm.linear), normalized(cm.karcher)};
    rows.push_back(std::move(row));
  }
  const std::vector<std::string> titles = {"linear", "karcher"};
  write_shape_grid_svg(path, rows, titles);
}

}  // namespace morphkit
