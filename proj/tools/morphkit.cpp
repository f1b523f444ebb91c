// morphkit: outline shape analysis toolkit.
//
// Pipeline: ingest -> resample -> align -> distmat -> classify, plus mean /
// morph / embed exports and a parameter sweep. See README.md for a worked
// example.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include <CLI11.hpp>

#include "morphkit/contour.hpp"
#include "morphkit/errors.hpp"
#include "morphkit/image.hpp"
#include "morphkit/io.hpp"
#include "morphkit/pipeline.hpp"
#include "morphkit/procrustes.hpp"
#include "morphkit/svg.hpp"
#include "morphkit/version.hpp"

namespace fs = std::filesystem;
using namespace morphkit;

namespace {

bool is_image_file(const fs::path& p) {
  const std::string e = p.extension().string();
  return e == ".pgm" || e == ".pnm" || e == ".png";
}

bool is_shape_file(const fs::path& p) {
  const std::string e = p.extension().string();
  return e == ".json" || e == ".csv" || e == ".txt";
}

// Expands directories into their contained shape/image files, sorted.
std::vector<std::string> collect_inputs(const std::vector<std::string>& args,
                                        bool images_too) {
  std::vector<std::string> files;
  for (const auto& a : args) {
    if (fs::is_directory(a)) {
      for (const auto& e : fs::directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        if (is_shape_file(e.path()) || (images_too && is_image_file(e.path())))
          files.push_back(e.path().string());
      }
    } else {
      files.push_back(a);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) raise(ErrorCode::invalid_argument, "no input files");
  return files;
}

std::vector<ShapeSample> load_shapes(const std::vector<std::string>& args) {
  std::vector<ShapeSample> shapes;
  for (const auto& f : collect_inputs(args, false))
    shapes.push_back(read_shape_any(f));
  return shapes;
}

std::string label_for(const fs::path& file,
                      const std::map<std::string, std::string>& labels) {
  const std::string stem = file.stem().string();
  if (const auto it = labels.find(stem); it != labels.end()) return it->second;
  // Fallback: the immediate parent directory name.
  const std::string parent = file.parent_path().filename().string();
  return parent.empty() ? "unlabeled" : parent;
}

void parse_k_range(const std::string& spec, int& k_min, int& k_max) {
  const size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    k_min = k_max = std::stoi(spec);
  } else {
    k_min = std::stoi(spec.substr(0, colon));
    k_max = std::stoi(spec.substr(colon + 1));
  }
}

RegistrationOptions::Seeds seeds_from_string(const std::string& s) {
  if (s == "coarse") return RegistrationOptions::Seeds::coarse;
  if (s == "all") return RegistrationOptions::Seeds::all;
  if (s == "none") return RegistrationOptions::Seeds::none;
  raise(ErrorCode::invalid_argument, "seeds must be coarse|all|none");
}

struct FigshareEntry {
  const char* dataset;
  const char* article;  // figshare article id from the dataset DOI
};
constexpr FigshareEntry kFigshare[] = {
    {"vases", "14551002"},
    {"leaves", "14551005"},
    {"shells", "14551044"},
};

int run_fetch(const std::string& dataset, const std::string& outdir) {
  bool any = false;
  for (const auto& e : kFigshare) {
    if (dataset != "all" && dataset != e.dataset) continue;
    any = true;
    const fs::path dir = fs::path(outdir) / e.dataset;
    fs::create_directories(dir);
    const std::string listing = (dir / "article.json").string();
    const std::string cmd =
        "curl -sfL https://api.figshare.com/v2/articles/" +
        std::string(e.article) + " -o " + listing;
    std::cout << "fetching article listing for " << e.dataset << "...\n";
    if (std::system(cmd.c_str()) != 0) {
      std::cerr << "download failed (is the network available and curl "
                   "installed?); dataset "
                << e.dataset << " skipped\n";
      return 2;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(listing));
    } catch (const std::exception& ex) {
      std::cerr << "unexpected listing format: " << ex.what() << "\n";
      return 2;
    }
    for (const auto& f : j.value("files", nlohmann::json::array())) {
      const std::string name = f.at("name").get<std::string>();
      const std::string url = f.at("download_url").get<std::string>();
      const std::string dest = (dir / name).string();
      std::cout << "  " << name << "\n";
      const std::string dl = "curl -sfL \"" + url + "\" -o \"" + dest + "\"";
      if (std::system(dl.c_str()) != 0) {
        std::cerr << "download of " << name << " failed\n";
        return 2;
      }
    }
  }
  if (!any) raise(ErrorCode::invalid_argument, "unknown dataset " + dataset);
  std::cout << "done; unpack any archives and point a manifest (or ingest) at "
               "the outline files\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphkit: 2-D outline shape analysis"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "INI config file (flags given on the command line win)");
  app.require_subcommand(1);

  try {
    // ------------------------------------------------------------ ingest
    auto* ingest = app.add_subcommand("ingest", "extract outlines from images/files");
    std::vector<std::string> ingest_inputs;
    std::string ingest_out, ingest_labels;
    double ingest_threshold = 0.5;
    bool ingest_symmetrize = false;
    int ingest_resample = 0;
    ingest->add_option("inputs", ingest_inputs, "images or outline files")->required();
    ingest->add_option("-o,--out", ingest_out, "output directory")->required();
    ingest->add_option("--threshold", ingest_threshold,
                       "binarization threshold on min-max normalized intensity");
    ingest->add_flag("--symmetrize", ingest_symmetrize,
                     "mirror the shorter half across the vertical axis");
    ingest->add_option("--resample", ingest_resample,
                       "equally spaced points per outline (0 = keep raw outline)");
    ingest->add_option("--labels", ingest_labels, "id,label CSV (default: parent dir)");
    ingest->callback([&] {
      fs::create_directories(ingest_out);
      std::map<std::string, std::string> labels;
      if (!ingest_labels.empty()) labels = read_labels_csv(ingest_labels);
      for (const auto& f : collect_inputs(ingest_inputs, true)) {
        const fs::path path(f);
        Outline outline;
        if (is_image_file(path)) {
          outline = extract_contour(read_image(f), ingest_threshold,
                                    path.stem().string());
        } else {
          outline = outline_from_sample(read_shape_any(f));
        }
        if (ingest_symmetrize) outline = symmetrize_vertical(outline);
        ShapeSample s;
        if (ingest_resample > 0) {
          s = resample(outline, ingest_resample);
        } else {
          s.points = outline.points;
        }
        s.id = path.stem().string();
        s.label = label_for(path, labels);
        write_shape_json((fs::path(ingest_out) / (s.id + ".json")).string(), s);
      }
      std::cout << "wrote shapes to " << ingest_out << "\n";
    });

    // ---------------------------------------------------------- resample
    auto* rs = app.add_subcommand("resample", "equal-arc-length spline resampling");
    std::vector<std::string> rs_inputs;
    std::string rs_out;
    int rs_n = 100;
    rs->add_option("inputs", rs_inputs)->required();
    rs->add_option("-o,--out", rs_out)->required();
    rs->add_option("-n,--points", rs_n, "points per shape (presets: vases 139, shells 150, leaves 200)");
    rs->callback([&] {
      fs::create_directories(rs_out);
      for (const auto& f : collect_inputs(rs_inputs, false)) {
        const ShapeSample raw = read_shape_any(f);
        ShapeSample s = resample(outline_from_sample(raw), rs_n);
        s.id = raw.id;
        s.label = raw.label;
        write_shape_json((fs::path(rs_out) / (s.id + ".json")).string(), s);
      }
      std::cout << "resampled to " << rs_n << " points in " << rs_out << "\n";
    });

    // ------------------------------------------------------------- align
    auto* al = app.add_subcommand("align", "generalized Procrustes alignment");
    std::vector<std::string> al_inputs;
    std::string al_out;
    al->add_option("inputs", al_inputs)->required();
    al->add_option("-o,--out", al_out)->required();
    al->callback([&] {
      fs::create_directories(al_out);
      const auto shapes = load_shapes(al_inputs);
      const auto pre = procrustes_align(shapes);
      for (size_t i = 0; i < pre.size(); ++i) {
        ShapeSample s;
        s.id = shapes[i].id;
        s.label = shapes[i].label;
        s.points = pre[i].points;
        write_shape_json((fs::path(al_out) / (s.id + ".json")).string(), s);
      }
      std::cout << "aligned " << pre.size() << " shapes into " << al_out << "\n";
    });

    // ------------------------------------------------------------ distmat
    auto* dm = app.add_subcommand("distmat", "pairwise distance matrix");
    std::vector<std::string> dm_inputs;
    std::string dm_out = "dist.csv", dm_method = "srvf", dm_seeds = "coarse";
    std::string dm_checkpoint;
    double dm_variance = 0.999, dm_sigma = 2.0, dm_kernel = 0.5, dm_lambda = 10.0;
    int dm_s = 2, dm_mesh = 20, dm_timesteps = 20, dm_jobs = 0;
    bool dm_bidir = false;
    dm->add_option("inputs", dm_inputs)->required();
    dm->add_option("-o,--out", dm_out);
    dm->add_option("--method", dm_method, "eigen|srvf|gc|lddmm")->required();
    dm->add_option("--variance", dm_variance, "eigen: explained-variance fraction");
    dm->add_option("--seeds", dm_seeds, "srvf: coarse|all|none");
    dm->add_option("--s", dm_s, "gc: basis order");
    dm->add_option("--mesh", dm_mesh, "gc: mesh size");
    dm->add_option("--sigma", dm_sigma, "gc: smoothing scale");
    dm->add_option("--kernel", dm_kernel, "lddmm: Gaussian kernel width");
    dm->add_option("--lambda", dm_lambda, "lddmm: data-attachment weight");
    dm->add_option("--timesteps", dm_timesteps, "lddmm: flow steps");
    dm->add_flag("--bidir", dm_bidir, "lddmm: average both directions");
    dm->add_option("--jobs", dm_jobs, "worker threads (0 = all cores)");
    dm->add_option("--checkpoint", dm_checkpoint, "checkpoint file for long runs");
    std::string dm_save_reps;
    dm->add_option("--save-reps", dm_save_reps,
                   "gc only: also write per-shape coefficient CSVs here");
    dm->callback([&] {
      const auto shapes = load_shapes(dm_inputs);
      MethodParams mp;
      mp.variance = dm_variance;
      mp.srvf.seeds = seeds_from_string(dm_seeds);
      mp.gc = CurrentConfig{dm_s, dm_mesh, dm_sigma};
      mp.lddmm.kernel_width = dm_kernel;
      mp.lddmm.lambda = dm_lambda;
      mp.lddmm.timesteps = dm_timesteps;
      mp.lddmm_bidirectional = dm_bidir;
      const Method method = method_from_string(dm_method);
      const DistanceMatrix d =
          method_distances(method, mp, shapes, dm_jobs, dm_checkpoint);
      write_distmat_csv(dm_out, d);
      if (!dm_save_reps.empty() && method == Method::gc) {
        fs::create_directories(dm_save_reps);
        for (const auto& s : shapes)
          write_current_csv((fs::path(dm_save_reps) / (s.id + ".csv")).string(),
                            current_representation(s, mp.gc));
      }
      std::cout << "wrote " << d.size << "x" << d.size << " matrix to " << dm_out << "\n";
    });

    // ------------------------------------------------------------ classify
    auto* cl = app.add_subcommand("classify", "k-NN evaluation on a distance matrix");
    std::string cl_dist, cl_labels, cl_out = "report.json", cl_k = "3:12";
    std::string cl_preset;
    int cl_replicates = 100;
    uint64_t cl_seed = 42;
    double cl_fraction = 0.67;
    int cl_per_class = 0;
    cl->add_option("--dist", cl_dist)->required();
    cl->add_option("--labels", cl_labels, "id,label CSV")->required();
    cl->add_option("--k", cl_k, "k or k_min:k_max");
    cl->add_option("--replicates", cl_replicates);
    cl->add_option("--seed", cl_seed);
    cl->add_option("--train-fraction", cl_fraction, "per-class train fraction");
    cl->add_option("--train-per-class", cl_per_class, "absolute per-class train count");
    cl->add_option("--preset", cl_preset,
                   "train:test ratio preset (vases 480:236, leaves 300:140, shells 120:115)");
    cl->add_option("-o,--out", cl_out);
    cl->callback([&] {
      const DistanceMatrix d = read_distmat_csv(cl_dist);
      const auto label_map = read_labels_csv(cl_labels);
      std::vector<LabeledIndex> labels;
      for (int i = 0; i < d.size; ++i) {
        const auto it = label_map.find(d.ids[i]);
        if (it == label_map.end())
          raise(ErrorCode::unknown_label, "no label for id " + d.ids[i]);
        labels.push_back({i, it->second});
      }
      int k_min = 3, k_max = 12;
      parse_k_range(cl_k, k_min, k_max);
      SplitSpec split;
      split.train_fraction = cl_fraction;
      split.train_per_class = cl_per_class;
      if (!cl_preset.empty()) split = preset_split(cl_preset);
      const EvaluationSummary s =
          evaluate(d, labels, split, k_min, k_max, cl_replicates, cl_seed);
      std::map<std::string, std::string> prov = d.params;
      prov["method"] = d.method;
      prov["tool_version"] = kVersion;
      write_report_json(cl_out, s, prov);
      std::cout << "best k=" << s.best_k << " mean F1=" << s.best_mean_f1
                << " -> " << cl_out << "\n";
    });

    // -------------------------------------------------------------- sweep
    auto* sw = app.add_subcommand("sweep", "parameter sweep, ranked by mean F1");
    std::string sw_manifest, sw_out = "sweep.csv", sw_method = "eigen", sw_k = "3:12";
    int sw_replicates = 20, sw_jobs = 0;
    uint64_t sw_seed = 42;
    double sw_fraction = 0.67;
    std::vector<double> sw_variances, sw_sigmas, sw_kernels, sw_lambdas;
    std::vector<int> sw_orders, sw_meshes;
    sw->add_option("--manifest", sw_manifest, "dataset manifest JSON")->required();
    sw->add_option("--method", sw_method)->required();
    sw->add_option("-o,--out", sw_out);
    sw->add_option("--k", sw_k);
    sw->add_option("--replicates", sw_replicates);
    sw->add_option("--seed", sw_seed);
    sw->add_option("--train-fraction", sw_fraction);
    sw->add_option("--jobs", sw_jobs);
    sw->add_option("--variances", sw_variances)->delimiter(',');
    sw->add_option("--orders", sw_orders)->delimiter(',');
    sw->add_option("--meshes", sw_meshes)->delimiter(',');
    sw->add_option("--sigmas", sw_sigmas)->delimiter(',');
    sw->add_option("--kernels", sw_kernels)->delimiter(',');
    sw->add_option("--lambdas", sw_lambdas)->delimiter(',');
    sw->callback([&] {
      const DatasetManifest m = load_manifest(sw_manifest);
      SweepSpec spec = SweepSpec::defaults(method_from_string(sw_method));
      if (!sw_variances.empty()) spec.variances = sw_variances;
      if (!sw_orders.empty()) spec.orders = sw_orders;
      if (!sw_meshes.empty()) spec.meshes = sw_meshes;
      if (!sw_sigmas.empty()) spec.sigmas = sw_sigmas;
      if (!sw_kernels.empty()) spec.kernel_widths = sw_kernels;
      if (!sw_lambdas.empty()) spec.lambdas = sw_lambdas;
      PipelineParams base;
      base.replicates = sw_replicates;
      base.seed = sw_seed;
      base.jobs = sw_jobs;
      base.split.train_fraction = sw_fraction;
      parse_k_range(sw_k, base.k_min, base.k_max);
      const auto rows = sweep(m, spec, base);
      write_sweep_csv(sw_out, rows);
      std::cout << "wrote " << rows.size() << " rows to " << sw_out << "\n";
    });

    // --------------------------------------------------------------- mean
    auto* mn = app.add_subcommand("mean", "per-class linear and Karcher means");
    std::vector<std::string> mn_inputs;
    std::string mn_out = "means.svg", mn_labels;
    mn->add_option("inputs", mn_inputs)->required();
    mn->add_option("-o,--out", mn_out, "SVG output path");
    mn->add_option("--labels", mn_labels, "id,label CSV overriding embedded labels");
    mn->callback([&] {
      auto shapes = load_shapes(mn_inputs);
      if (!mn_labels.empty()) {
        const auto label_map = read_labels_csv(mn_labels);
        for (auto& s : shapes)
          if (const auto it = label_map.find(s.id); it != label_map.end())
            s.label = it->second;
      }
      const auto means = class_means(shapes);
      export_means_svg(mn_out, means);
      for (const auto& cm : means)
        if (!cm.karcher_converged)
          std::cerr << "warning: Karcher mean for class " << cm.label
                    << " did not fully converge\n";
      std::cout << "wrote " << means.size() << " class means to " << mn_out << "\n";
    });

    // --------------------------------------------------------------- morph
    auto* mo = app.add_subcommand("morph", "geodesic morph sequence between two shapes");
    std::string mo_a, mo_b, mo_out = "morph.svg", mo_seeds = "coarse";
    int mo_steps = 5;
    mo->add_option("a", mo_a, "source shape file")->required();
    mo->add_option("b", mo_b, "target shape file")->required();
    mo->add_option("--steps", mo_steps, "kappa >= 2");
    mo->add_option("--seeds", mo_seeds, "coarse|all|none");
    mo->add_option("-o,--out", mo_out, "SVG output path");
    mo->callback([&] {
      const ShapeSample a = read_shape_any(mo_a);
      const ShapeSample b = read_shape_any(mo_b);
      RegistrationOptions opts;
      opts.seeds = seeds_from_string(mo_seeds);
      const GeodesicPath path = geodesic_path(a, b, mo_steps, opts);
      write_morph_svg(mo_out, path.shapes);
      nlohmann::json j;
      j["steps"] = path.steps;
      j["energy"] = path.energy;
      j["endpoint_distance"] = srvf_distance(a, b, opts).distance;
      write_text_file(mo_out + ".json", j.dump(2) + "\n");
      std::cout << "path energy " << path.energy << " -> " << mo_out << "\n";
    });

    // --------------------------------------------------------------- embed
    auto* em = app.add_subcommand("embed", "PC score export (eigen or gc space)");
    std::vector<std::string> em_inputs;
    std::string em_out = "embed.csv", em_method = "eigen", em_model;
    int em_dims = 3, em_s = 2, em_mesh = 20;
    double em_sigma = 2.0;
    em->add_option("inputs", em_inputs)->required();
    em->add_option("-o,--out", em_out);
    em->add_option("--method", em_method, "eigen|gc");
    em->add_option("--dims", em_dims);
    em->add_option("--s", em_s);
    em->add_option("--mesh", em_mesh);
    em->add_option("--sigma", em_sigma);
    em->add_option("--save-model", em_model, "also persist the PCA model JSON");
    em->callback([&] {
      const auto shapes = load_shapes(em_inputs);
      std::vector<std::string> ids, labels;
      for (const auto& s : shapes) {
        ids.push_back(s.id);
        labels.push_back(s.label ? *s.label : "unlabeled");
      }
      EigenModel model;
      std::vector<std::vector<double>> vectors;
      if (em_method == "eigen") {
        const auto pre = procrustes_align(shapes);
        for (const auto& p : pre) vectors.push_back(flatten(p));
        model = fit_pca_vectors(vectors);
      } else if (em_method == "gc") {
        const CurrentConfig cfg{em_s, em_mesh, em_sigma};
        std::vector<CurrentRep> reps;
        for (const auto& s : shapes)
          reps.push_back(current_representation(s, cfg));
        for (const auto& r : reps) vectors.push_back(r.flat());
        model = current_pca(reps);
      } else {
        raise(ErrorCode::invalid_argument, "embed method must be eigen or gc");
      }
      export_embedding(em_out, model, vectors, ids, labels, em_dims);
      if (!em_model.empty()) write_eigenmodel_json(em_model, model);
      std::cout << "wrote scores to " << em_out << "\n";
    });

    // ----------------------------------------------------------- fetch-data
    auto* fd = app.add_subcommand("fetch-data", "download the outline datasets");
    std::string fd_dataset = "all", fd_out = "data";
    fd->add_option("--dataset", fd_dataset, "vases|leaves|shells|all");
    fd->add_option("-o,--out", fd_out);
    fd->callback([&] {
      const int rc = run_fetch(fd_dataset, fd_out);
      if (rc != 0) std::exit(rc);
    });

    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors exit 1
  } catch (const MorphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
