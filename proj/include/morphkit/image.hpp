#pragma once

#include <string>
#include <vector>

namespace morphkit {

// Grayscale raster, row-major, values in [0, 1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  double at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
  double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  bool empty() const { return width <= 0 || height <= 0; }
};

// Reads PGM (P2/P5) always; PNG when built with libpng. Color PNG input is
// converted to luminance. Throws IoError / ParseError.
GrayImage read_image(const std::string& path);

GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);

bool png_supported();
GrayImage read_png(const std::string& path);

}  // namespace morphkit
