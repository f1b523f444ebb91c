#include "morphkit/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "morphkit/errors.hpp"

namespace morphkit {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    raise(ErrorCode::parse_error, path + ": " + e.what());
  }
  return j;
}

void dump_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  out << content;
}

void write_match_json(const std::string& path, const MatchResult& m,
                      const LddmmConfig& config) {
  json j;
  j["distance"] = m.distance;
  j["residual"] = m.residual;
  j["converged"] = m.converged;
  j["timesteps"] = config.timesteps;
  j["kernel_width"] = config.kernel_width;
  j["lambda"] = config.lambda;
  j["momenta"] = m.momenta;
  json pts = json::array();
  for (const Vec2 p : m.deformed.points) pts.push_back(json::array({p.x, p.y}));
  j["deformed"] = std::move(pts);
  dump_json(path, j);
}

uint64_t fnv1a(const void* data, size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 1469598103934665603ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

uint64_t hash_file(const std::string& path) { return fnv1a(read_text_file(path)); }

ShapeSample read_shape_json(const std::string& path) {
  const json j = load_json(path);
  ShapeSample s;
  try {
    s.id = j.at("id").get<std::string>();
    if (j.contains("label") && !j["label"].is_null())
      s.label = j["label"].get<std::string>();
    for (const auto& p : j.at("points"))
      s.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  } catch (const json::exception& e) {
    raise(ErrorCode::parse_error, path + ": " + e.what());
  }
  if (s.points.size() < 3)
    raise(ErrorCode::too_few_points, path + ": fewer than 3 points");
  return s;
}

void write_shape_json(const std::string& path, const ShapeSample& s) {
  json j;
  j["id"] = s.id;
  if (s.label)
    j["label"] = *s.label;
  else
    j["label"] = nullptr;
  json pts = json::array();
  for (const Vec2 p : s.points) pts.push_back(json::array({p.x, p.y}));
  j["points"] = std::move(pts);
  dump_json(path, j);
}

ShapeSample read_shape_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  ShapeSample s;
  s.id = std::filesystem::path(path).stem().string();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, y;
    if (ls >> x >> y) s.points.push_back({x, y});
    // non-numeric lines (e.g. an "x,y" header) are skipped
  }
  if (s.points.size() < 3)
    raise(ErrorCode::too_few_points, path + ": fewer than 3 points");
  return s;
}

void write_shape_csv(const std::string& path, const ShapeSample& s) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  for (const Vec2 p : s.points)
    out << format_double(p.x) << "," << format_double(p.y) << "\n";
}

ShapeSample read_shape_any(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".json") return read_shape_json(path);
  if (ext == ".csv" || ext == ".txt") return read_shape_csv(path);
  // Sniff: JSON starts with '{'.
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  char c = 0;
  in >> c;
  return c == '{' ? read_shape_json(path) : read_shape_csv(path);
}

Outline outline_from_sample(const ShapeSample& s) {
  return make_outline(s.points, s.id);
}

void write_distmat_csv(const std::string& path, const DistanceMatrix& dm) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  out << "# method=" << dm.method << "\n";
  for (const auto& [k, v] : dm.params) out << "# " << k << "=" << v << "\n";
  for (int i = 0; i < dm.size; ++i) out << (i ? "," : "") << dm.ids[i];
  out << "\n";
  for (int i = 0; i < dm.size; ++i) {
    for (int j = i + 1; j < dm.size; ++j)
      out << (j > i + 1 ? "," : "") << format_double(dm.at(i, j));
    out << "\n";
  }
}

DistanceMatrix read_distmat_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  DistanceMatrix dm;
  std::string line;
  // provenance comments
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') break;
    const size_t eq = line.find('=');
    if (eq != std::string::npos) {
      std::string key = line.substr(1, eq - 1);
      while (!key.empty() && key.front() == ' ') key.erase(key.begin());
      while (!key.empty() && key.back() == ' ') key.pop_back();
      const std::string val = line.substr(eq + 1);
      if (key == "method")
        dm.method = val;
      else
        dm.params[key] = val;
    }
  }
  // header row of ids
  {
    std::istringstream hs(line);
    std::string id;
    while (std::getline(hs, id, ',')) dm.ids.push_back(id);
  }
  dm.size = static_cast<int>(dm.ids.size());
  if (dm.size == 0) raise(ErrorCode::parse_error, path + ": empty header");
  dm.entries.assign(static_cast<size_t>(dm.size) * dm.size, 0.0);
  for (int i = 0; i < dm.size - 1; ++i) {
    if (!std::getline(in, line))
      raise(ErrorCode::parse_error, path + ": truncated matrix");
    std::istringstream ls(line);
    std::string cell;
    for (int j = i + 1; j < dm.size; ++j) {
      if (!std::getline(ls, cell, ','))
        raise(ErrorCode::parse_error, path + ": short row");
      const double v = std::stod(cell);
      dm.at(i, j) = v;
      dm.at(j, i) = v;
    }
  }
  return dm;
}

std::map<std::string, std::string> read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      raise(ErrorCode::parse_error, path + ": expected id,label");
    out[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return out;
}

void write_labels_csv(const std::string& path,
                      const std::map<std::string, std::string>& labels) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  for (const auto& [id, label] : labels) out << id << "," << label << "\n";
}

void write_eigenmodel_json(const std::string& path, const EigenModel& m) {
  json j;
  j["mean"] = m.mean;
  j["eigenvalues"] = m.eigenvalues;
  j["eigenvectors"] = m.eigenvectors;
  j["n_samples"] = m.n_samples;
  dump_json(path, j);
}

EigenModel read_eigenmodel_json(const std::string& path) {
  const json j = load_json(path);
  EigenModel m;
  try {
    m.mean = j.at("mean").get<std::vector<double>>();
    m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    m.eigenvectors = j.at("eigenvectors").get<std::vector<std::vector<double>>>();
    m.n_samples = j.at("n_samples").get<int>();
  } catch (const json::exception& e) {
    raise(ErrorCode::parse_error, path + ": " + e.what());
  }
  return m;
}

void write_current_csv(const std::string& path, const CurrentRep& rep) {
  {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::io_error, "cannot write " + path);
    const int nb = rep.basis_per_axis();
    for (int block = 0; block < 2; ++block) {
      const auto& plane = block == 0 ? rep.coeff_x : rep.coeff_y;
      for (int r = 0; r < nb; ++r) {
        for (int c = 0; c < nb; ++c)
          out << (c ? "," : "") << format_double(plane[static_cast<size_t>(r) * nb + c]);
        out << "\n";
      }
    }
  }
  json cfg;
  cfg["s"] = rep.config.order;
  cfg["mesh"] = rep.config.mesh;
  cfg["sigma"] = rep.config.sigma;
  cfg["id"] = rep.provenance;
  dump_json(path + ".config.json", cfg);
}

CurrentRep read_current_csv(const std::string& path) {
  const json cfg = load_json(path + ".config.json");
  CurrentRep rep;
  rep.config.order = cfg.at("s").get<int>();
  rep.config.mesh = cfg.at("mesh").get<int>();
  rep.config.sigma = cfg.at("sigma").get<double>();
  rep.provenance = cfg.at("id").get<std::string>();

  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  const int nb = rep.basis_per_axis();
  rep.coeff_x.resize(static_cast<size_t>(nb) * nb);
  rep.coeff_y.resize(static_cast<size_t>(nb) * nb);
  std::string line;
  for (int block = 0; block < 2; ++block) {
    auto& plane = block == 0 ? rep.coeff_x : rep.coeff_y;
    for (int r = 0; r < nb; ++r) {
      if (!std::getline(in, line))
        raise(ErrorCode::parse_error, path + ": truncated coefficients");
      std::istringstream ls(line);
      std::string cell;
      for (int c = 0; c < nb; ++c) {
        if (!std::getline(ls, cell, ','))
          raise(ErrorCode::parse_error, path + ": short row");
        plane[static_cast<size_t>(r) * nb + c] = std::stod(cell);
      }
    }
  }
  return rep;
}

void write_report_json(const std::string& path, const EvaluationSummary& s,
                       const std::map<std::string, std::string>& provenance) {
  json j;
  j["provenance"] = provenance;
  j["seed"] = s.seed;
  j["replicates"] = s.replicates;
  j["k_range"] = json::array({s.k_min, s.k_max});
  j["best_k"] = s.best_k;
  j["best_mean_f1"] = s.best_mean_f1;
  j["degenerate_ci"] = s.degenerate_ci;
  json per_k = json::array();
  for (const auto& st : s.per_k) {
    per_k.push_back({{"k", st.k},
                     {"mean_f1", st.mean_f1},
                     {"std_f1", st.std_f1},
                     {"ci95", st.ci95}});
  }
  j["per_k"] = std::move(per_k);
  j["scores"] = s.scores;
  j["class_order"] = s.class_order;
  j["best_confusion"] = s.best_confusion;
  j["best_replicate"] = s.best_replicate;
  dump_json(path, j);
}

}  // namespace morphkit
