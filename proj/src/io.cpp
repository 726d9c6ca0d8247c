#include "lowlight/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace lowlight {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

PlanarImage load_png_file(FILE* f, const std::string& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(path, "libpng init failed");
  }

  std::vector<png_byte> raster;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "PNG decode failed");
  }

  png_init_io(png, f);
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "unsupported PNG channel count " + std::to_string(channels));
  }

  const size_t rowbytes = png_get_rowbytes(png, info);
  raster.resize(rowbytes * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = raster.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  PlanarImage img(static_cast<int>(h), static_cast<int>(w), channels);
  const size_t plane = img.plane_size();
  for (png_uint_32 y = 0; y < h; ++y) {
    const png_byte* row = raster.data() + y * rowbytes;
    for (png_uint_32 x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        double v;
        if (out_depth == 16) {
          // network byte order
          const size_t o = (static_cast<size_t>(x) * channels + c) * 2;
          v = ((row[o] << 8) | row[o + 1]) / 65535.0;
        } else {
          v = row[static_cast<size_t>(x) * channels + c] / 255.0;
        }
        img.data[c * plane + y * w + x] = v;
      }
    }
  }
  return img;
}

int pnm_read_value(FILE* f, const std::string& path) {
  // whitespace and '#' comments separate header tokens
  int ch = std::fgetc(f);
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = std::fgetc(f);
    } else if (std::isspace(ch)) {
      ch = std::fgetc(f);
    } else {
      break;
    }
  }
  if (ch == EOF || !std::isdigit(ch)) fail(path, "malformed PNM header");
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > 1 << 30) fail(path, "malformed PNM header");
    ch = std::fgetc(f);
  }
  // ch is the single whitespace terminating the token; raster starts right
  // after the maxval's terminator
  return static_cast<int>(value);
}

PlanarImage load_pnm_file(FILE* f, const std::string& path, int channels) {
  std::fgetc(f);
  std::fgetc(f);  // magic, already inspected
  const int w = pnm_read_value(f, path);
  const int h = pnm_read_value(f, path);
  const int maxval = pnm_read_value(f, path);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
    fail(path, "malformed PNM header");

  const int bytes_per_sample = maxval < 256 ? 1 : 2;
  const size_t count = static_cast<size_t>(w) * h * channels;
  std::vector<unsigned char> raw(count * bytes_per_sample);
  if (std::fread(raw.data(), 1, raw.size(), f) != raw.size())
    fail(path, "truncated PNM raster");

  PlanarImage img(h, w, channels);
  const size_t plane = img.plane_size();
  for (size_t i = 0; i < plane; ++i) {
    for (int c = 0; c < channels; ++c) {
      const size_t s = i * channels + c;  // interleaved raster
      int v;
      if (bytes_per_sample == 2)
        v = (raw[2 * s] << 8) | raw[2 * s + 1];  // big-endian per the format
      else
        v = raw[s];
      img.data[c * plane + i] = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

}  // namespace

PlanarImage load_image(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) fail(path, "cannot open file");

  unsigned char magic[8] = {};
  const size_t got = std::fread(magic, 1, sizeof magic, f.get());
  std::rewind(f.get());
  if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0) return load_png_file(f.get(), path);
  if (got >= 2 && magic[0] == 'P' && magic[1] == '5') return load_pnm_file(f.get(), path, 1);
  if (got >= 2 && magic[0] == 'P' && magic[1] == '6') return load_pnm_file(f.get(), path, 3);

  std::string m;
  for (size_t i = 0; i < got && i < 2; ++i)
    m += std::isprint(magic[i]) ? static_cast<char>(magic[i]) : '?';
  fail(path, "unsupported image format (magic '" + m +
                 "'); expected PNG or binary PPM/PGM");
}

void save_png(const PlanarImage& img, const std::string& path) {
  if (img.height <= 0 || img.width <= 0) fail(path, "refusing to write an empty image");
  if (img.channels != 1 && img.channels != 3)
    fail(path, "PNG writer supports 1 or 3 channels");

  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) fail(path, "cannot open file for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(path, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "PNG encode failed");
  }

  png_init_io(png, f.get());
  png_set_IHDR(png, info, img.width, img.height, 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const size_t plane = img.plane_size();
  std::vector<png_byte> row(static_cast<size_t>(img.width) * img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        const double v = std::clamp(img.data[c * plane + static_cast<size_t>(y) * img.width + x],
                                    0.0, 1.0);
        row[static_cast<size_t>(x) * img.channels + c] =
            static_cast<png_byte>(std::lround(v * 255.0));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace lowlight
