#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace bovw {

namespace {

// Pearson over the overlap of a with b shifted by (dx, dy).
double overlap_corr(const GrayImage& a, const GrayImage& b, int dx, int dy) {
  int x0 = std::max(0, dx), x1 = std::min(a.width, b.width + dx);
  int y0 = std::max(0, dy), y1 = std::min(a.height, b.height + dy);
  std::int64_t n = static_cast<std::int64_t>(x1 - x0) * (y1 - y0);
  if (n <= 0) return -std::numeric_limits<double>::infinity();  // empty overlap: skip
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      double va = a.at(x, y);
      double vb = b.at(x - dx, y - dy);
      sa += va;
      sb += vb;
      saa += va * va;
      sbb += vb * vb;
      sab += va * vb;
    }
  }
  double var_a = saa - sa * sa / n;
  double var_b = sbb - sb * sb / n;
  if (var_a <= 0.0 || var_b <= 0.0) return 0.0;
  return (sab - sa * sb / n) / std::sqrt(var_a * var_b);
}

constexpr int kDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

std::uint64_t pair_key(int la, int lb, int dir) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(la)) << 34) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lb)) << 2) |
         static_cast<std::uint32_t>(dir);
}

}  // namespace

double xcorr(const GrayImage& a, const GrayImage& b) {
  if (!a.same_shape(b)) throw InvalidInput("image dimensions differ");
  return overlap_corr(a, b, 0, 0);
}

double xcorr_shift(const GrayImage& a, const GrayImage& b, int max_shift) {
  if (!a.same_shape(b)) throw InvalidInput("image dimensions differ");
  if (max_shift < 0) throw InvalidInput("max_shift must be >= 0");
  double best = -std::numeric_limits<double>::infinity();
  for (int dy = -max_shift; dy <= max_shift; ++dy)
    for (int dx = -max_shift; dx <= max_shift; ++dx)
      best = std::max(best, overlap_corr(a, b, dx, dy));
  return best;
}

double direct_comparison(const Layout& layout, const WordGrid& truth) {
  if (layout.sampling != truth.sampling) throw InvalidInput("grid shapes differ");
  int correct = 0;
  for (std::size_t i = 0; i < layout.labels.size(); ++i)
    if (layout.labels[i] == truth.labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(layout.labels.size());
}

double neighbor_comparison(const Layout& layout, const WordGrid& truth) {
  if (layout.sampling != truth.sampling) throw InvalidInput("grid shapes differ");
  const int gw = layout.sampling.grid_w, gh = layout.sampling.grid_h;
  if (gw * gh < 2 || (gw < 2 && gh < 2))
    throw InvalidInput("grid has no 4-neighbor adjacency");

  std::unordered_set<std::uint64_t> truth_pairs;
  for (int y = 0; y < gh; ++y)
    for (int x = 0; x < gw; ++x)
      for (int dir = 0; dir < 4; ++dir) {
        int nx = x + kDirs[dir][0], ny = y + kDirs[dir][1];
        if (nx < 0 || nx >= gw || ny < 0 || ny >= gh) continue;
        truth_pairs.insert(pair_key(truth.labels[y * gw + x], truth.labels[ny * gw + nx], dir));
      }

  std::int64_t total = 0, good = 0;
  for (int y = 0; y < gh; ++y)
    for (int x = 0; x < gw; ++x)
      for (int dir = 0; dir < 4; ++dir) {
        int nx = x + kDirs[dir][0], ny = y + kDirs[dir][1];
        if (nx < 0 || nx >= gw || ny < 0 || ny >= gh) continue;
        ++total;
        std::uint64_t key =
            pair_key(layout.labels[y * gw + x], layout.labels[ny * gw + nx], dir);
        if (truth_pairs.count(key)) ++good;
      }
  return static_cast<double>(good) / static_cast<double>(total);
}

}  // namespace bovw
