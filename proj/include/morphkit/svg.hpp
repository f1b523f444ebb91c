#pragma once

#include <span>
#include <string>
#include <vector>

#include "morphkit/outline.hpp"

namespace morphkit {

// A row of shapes laid out left-to-right under one label.
struct SvgRow {
  std::string label;
  std::vector<ShapeSample> shapes;
};

// Writes closed outlines in a labeled grid. All shapes share one scale
// factor (equal vertical scale), each centered in its own cell.
void write_shape_grid_svg(const std::string& path, std::span<const SvgRow> rows,
                          std::span<const std::string> column_titles = {});

// Morph sequence: kappa+1 outlines left-to-right.
void write_morph_svg(const std::string& path,
                     std::span<const ShapeSample> shapes);

}  // namespace morphkit
