#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace bovw {

namespace {

// Skips whitespace and '#' comments between PNM header tokens.
int next_header_int(std::istream& in, const std::string& path) {
  for (;;) {
    int c = in.peek();
    if (c == EOF) throw IoError("truncated PNM header: " + path);
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw IoError("malformed PNM header: " + path);
  return value;
}

}  // namespace

GrayImage load_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  bool color;
  if (magic[0] == 'P' && magic[1] == '5') {
    color = false;
  } else if (magic[0] == 'P' && magic[1] == '6') {
    color = true;
  } else {
    throw IoError("unsupported image format (expected P5/P6): " + path);
  }
  int width = next_header_int(in, path);
  int height = next_header_int(in, path);
  int maxval = next_header_int(in, path);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    throw IoError("unsupported PNM dimensions or maxval: " + path);
  in.get();  // single whitespace after maxval

  std::size_t count = static_cast<std::size_t>(width) * height * (color ? 3 : 1);
  std::vector<unsigned char> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count)
    throw IoError("truncated pixel data: " + path);

  GrayImage image(width, height);
  const float scale = 1.0f / static_cast<float>(maxval);
  if (color) {
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
      float r = raw[3 * i] * scale;
      float g = raw[3 * i + 1] * scale;
      float b = raw[3 * i + 2] * scale;
      image.pixels[i] = 0.299f * r + 0.587f * g + 0.114f * b;
    }
  } else {
    for (std::size_t i = 0; i < image.pixels.size(); ++i) image.pixels[i] = raw[i] * scale;
  }
  return image;
}

void save_pgm(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  std::vector<unsigned char> raw(image.pixels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    float v = std::clamp(image.pixels[i], 0.0f, 1.0f);
    raw[i] = static_cast<unsigned char>(std::lround(v * 255.0f));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace bovw
