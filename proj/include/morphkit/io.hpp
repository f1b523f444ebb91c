#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morphkit/classify.hpp"
#include "morphkit/currents.hpp"
#include "morphkit/distmat.hpp"
#include "morphkit/eigenshape.hpp"
#include "morphkit/lddmm.hpp"
#include "morphkit/outline.hpp"

namespace morphkit {

// Shape files. JSON schema: {"id": str, "label": str|null, "points": [[x,y],...]}
// (bit-exact round trip); CSV: two columns x,y, one file per shape.
ShapeSample read_shape_json(const std::string& path);
void write_shape_json(const std::string& path, const ShapeSample& s);
ShapeSample read_shape_csv(const std::string& path);
void write_shape_csv(const std::string& path, const ShapeSample& s);
// Auto-detects .json / .csv.
ShapeSample read_shape_any(const std::string& path);

Outline outline_from_sample(const ShapeSample& s);

// Distance matrix CSV: '#' provenance lines (method, params, one per line),
// a header row of ids, then strictly upper-triangular rows.
void write_distmat_csv(const std::string& path, const DistanceMatrix& dm);
DistanceMatrix read_distmat_csv(const std::string& path);

// Labels CSV: "id,label" per line.
std::map<std::string, std::string> read_labels_csv(const std::string& path);
void write_labels_csv(const std::string& path,
                      const std::map<std::string, std::string>& labels);

// EigenModel JSON (mean, eigenvalues, eigenvectors row-major, n_samples).
void write_eigenmodel_json(const std::string& path, const EigenModel& m);
EigenModel read_eigenmodel_json(const std::string& path);

// CurrentRep: CSV matrix (x block then y block) with a JSON config sidecar
// at <path>.config.json.
void write_current_csv(const std::string& path, const CurrentRep& rep);
CurrentRep read_current_csv(const std::string& path);

// Evaluation report JSON (summary, per-replicate scores, best-run confusion,
// provenance). No timestamps: reports are byte-reproducible.
void write_report_json(const std::string& path, const EvaluationSummary& s,
                       const std::map<std::string, std::string>& provenance);

// LDDMM match dump for deformation visualization: distance, residual,
// momenta, and the deformed curve.
void write_match_json(const std::string& path, const MatchResult& m,
                      const LddmmConfig& config);

uint64_t fnv1a(const void* data, size_t len);
uint64_t fnv1a(const std::string& s);
uint64_t hash_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace morphkit
