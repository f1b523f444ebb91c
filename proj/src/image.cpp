#include "morphkit/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "morphkit/errors.hpp"

#if defined(MORPHKIT_HAVE_PNG)
#include <png.h>
#endif

namespace morphkit {
namespace {

std::string lower_ext(const std::string& path) {
  const size_t dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  return ext;
}

// Reads the next whitespace-delimited token, skipping '#' comments.
std::string next_pnm_token(std::istream& in) {
  std::string tok;
  while (in) {
    const int c = in.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);

  const std::string magic = next_pnm_token(in);
  if (magic != "P2" && magic != "P5")
    raise(ErrorCode::parse_error, path + ": not a PGM (P2/P5) file");

  const int w = std::stoi(next_pnm_token(in));
  const int h = std::stoi(next_pnm_token(in));
  const int maxval = std::stoi(next_pnm_token(in));
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
    raise(ErrorCode::parse_error, path + ": bad PGM header");

  GrayImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<size_t>(w) * h);

  if (magic == "P2") {
    for (auto& p : img.pixels) {
      const std::string tok = next_pnm_token(in);
      if (tok.empty()) raise(ErrorCode::parse_error, path + ": truncated P2 data");
      p = std::stod(tok) / maxval;
    }
  } else {
    // P5: one whitespace byte after maxval, then raw samples.
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(img.pixels.size() * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<size_t>(in.gcount()) != buf.size())
      raise(ErrorCode::parse_error, path + ": truncated P5 data");
    for (size_t i = 0; i < img.pixels.size(); ++i) {
      const unsigned v = bytes == 1
                             ? buf[i]
                             : (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1];
      img.pixels[i] = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

void write_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (const double v : img.pixels) {
    const double c = v < 0 ? 0 : (v > 1 ? 1 : v);
    out.put(static_cast<char>(static_cast<unsigned char>(c * 255.0 + 0.5)));
  }
}

bool png_supported() {
#if defined(MORPHKIT_HAVE_PNG)
  return true;
#else
  return false;
#endif
}

#if defined(MORPHKIT_HAVE_PNG)

GrayImage read_png(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) raise(ErrorCode::io_error, "cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    raise(ErrorCode::io_error, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    raise(ErrorCode::parse_error, path + ": PNG decode failed");
  }

  png_init_io(png, fp);
  png_read_info(png, info);

  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  const png_byte color = png_get_color_type(png, info);
  if (color & PNG_COLOR_MASK_COLOR)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);  // default luminance weights
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  GrayImage img;
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.pixels.resize(static_cast<size_t>(img.width) * img.height);

  std::vector<unsigned char> row(png_get_rowbytes(png, info));
  std::vector<std::vector<unsigned char>> rows(img.height, row);
  std::vector<png_bytep> row_ptrs(img.height);
  for (int y = 0; y < img.height; ++y) row_ptrs[y] = rows[y].data();
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      img.at(x, y) = rows[y][x] / 255.0;
  return img;
}

#else

GrayImage read_png(const std::string& path) {
  raise(ErrorCode::io_error,
        "PNG support not built (libpng missing); convert " + path + " to PGM");
}

#endif

GrayImage read_image(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "pgm" || ext == "pnm") return read_pgm(path);
  if (ext == "png") return read_png(path);
  raise(ErrorCode::io_error, path + ": unsupported image format (use PGM or PNG)");
}

}  // namespace morphkit
