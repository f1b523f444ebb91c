#include "morphkit/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "morphkit/errors.hpp"

namespace morphkit {
namespace {

struct Box {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void add(Vec2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  Vec2 center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

void write_shape_grid_svg(const std::string& path, std::span<const SvgRow> rows,
                          std::span<const std::string> column_titles) {
  if (rows.empty()) raise(ErrorCode::invalid_argument, "svg: no rows");

  size_t cols = 0;
  double max_extent = 0.0;
  for (const auto& row : rows) {
    cols = std::max(cols, row.shapes.size());
    for (const auto& s : row.shapes) {
      Box b;
      for (const Vec2 p : s.points) b.add(p);
      max_extent = std::max({max_extent, b.width(), b.height()});
    }
  }
  if (cols == 0 || max_extent <= 0.0)
    raise(ErrorCode::invalid_argument, "svg: nothing to draw");

  const double cell = 120.0;
  const double margin = 10.0;
  const double label_w = 90.0;
  const double title_h = column_titles.empty() ? 0.0 : 24.0;
  const double scale = (cell - 2 * margin) / max_extent;  // shared by all shapes

  const double width = label_w + cols * cell;
  const double height = title_h + rows.size() * cell;

  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << " " << fmt(height) << "\">\n";

  for (size_t c = 0; c < column_titles.size(); ++c)
    out << "  <text x=\"" << fmt(label_w + c * cell + cell / 2) << "\" y=\"16\" "
        << "text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">"
        << column_titles[c] << "</text>\n";

  for (size_t r = 0; r < rows.size(); ++r) {
    const double row_y = title_h + r * cell;
    out << "  <text x=\"6\" y=\"" << fmt(row_y + cell / 2)
        << "\" font-size=\"13\" font-family=\"sans-serif\" "
           "dominant-baseline=\"middle\">"
        << rows[r].label << "</text>\n";
    for (size_t c = 0; c < rows[r].shapes.size(); ++c) {
      const auto& s = rows[r].shapes[c];
      Box b;
      for (const Vec2 p : s.points) b.add(p);
      const Vec2 ctr = b.center();
      const double cx = label_w + c * cell + cell / 2;
      const double cy = row_y + cell / 2;
      out << "  <polygon fill=\"none\" stroke=\"black\" stroke-width=\"1\" "
             "points=\"";
      for (const Vec2 p : s.points) {
        // y flipped: SVG y grows downward.
        out << fmt(cx + (p.x - ctr.x) * scale) << ","
            << fmt(cy - (p.y - ctr.y) * scale) << " ";
      }
      out << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

void write_morph_svg(const std::string& path,
                     std::span<const ShapeSample> shapes) {
  if (shapes.empty()) raise(ErrorCode::invalid_argument, "svg: no shapes");
  SvgRow row;
  row.label = "";
  row.shapes.assign(shapes.begin(), shapes.end());
  const SvgRow rows[1] = {row};
  write_shape_grid_svg(path, rows);
}

}  // namespace morphkit
