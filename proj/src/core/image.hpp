#pragma once

#include <string>
#include <vector>

#include "common.hpp"

namespace bovw {

// Grayscale raster with row-major luminance values in [0, 1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, float fill = 0.0f)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

  bool same_shape(const GrayImage& other) const {
    return width == other.width && height == other.height;
  }
};

// Reads a binary PGM (P5) or PPM (P6) file, maxval <= 255. Color inputs are
// converted to luminance with 0.299 R + 0.587 G + 0.114 B.
GrayImage load_pnm(const std::string& path);

// Writes a binary PGM (P5) file with maxval 255.
void save_pgm(const GrayImage& image, const std::string& path);

}  // namespace bovw
