#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bovw {

SamplingSpec SamplingSpec::for_image(int image_w, int image_h, int patch_size, int stride) {
  if (patch_size < 1 || stride < 1) throw InvalidInput("patch_size and stride must be >= 1");
  if (image_w < patch_size || image_h < patch_size)
    throw InvalidInput("image smaller than patch");
  if ((image_w - patch_size) % stride != 0 || (image_h - patch_size) % stride != 0)
    throw InvalidInput("stride must divide (image_dim - patch_size)");
  SamplingSpec spec;
  spec.patch_size = patch_size;
  spec.stride = stride;
  spec.grid_w = (image_w - patch_size) / stride + 1;
  spec.grid_h = (image_h - patch_size) / stride + 1;
  return spec;
}

SamplingSpec SamplingSpec::for_grid(int grid_w, int grid_h, int patch_size, int stride) {
  if (grid_w < 1 || grid_h < 1) throw InvalidInput("grid dimensions must be >= 1");
  if (patch_size < 1 || stride < 1) throw InvalidInput("patch_size and stride must be >= 1");
  SamplingSpec spec;
  spec.patch_size = patch_size;
  spec.stride = stride;
  spec.grid_w = grid_w;
  spec.grid_h = grid_h;
  return spec;
}

namespace {

Descriptor describe_patch(const std::vector<float>& patch, int ps) {
  Descriptor desc(kDescriptorDim, 0.0f);
  auto px = [&](int x, int y) { return patch[static_cast<std::size_t>(y) * ps + x]; };
  constexpr double kTwoPi = 6.283185307179586;
  for (int y = 0; y < ps; ++y) {
    for (int x = 0; x < ps; ++x) {
      // central differences, clamped at patch borders
      int xl = std::max(x - 1, 0), xr = std::min(x + 1, ps - 1);
      int yu = std::max(y - 1, 0), yd = std::min(y + 1, ps - 1);
      double gx = (px(xr, y) - px(xl, y)) / static_cast<double>(xr - xl);
      double gy = (px(x, yd) - px(x, yu)) / static_cast<double>(yd - yu);
      double mag = std::sqrt(gx * gx + gy * gy);
      if (mag <= 0.0) continue;
      double theta = std::atan2(gy, gx);  // [-pi, pi]
      int bin = static_cast<int>(std::floor((theta + 3.141592653589793) / kTwoPi * 8.0));
      bin = ((bin % 8) + 8) % 8;
      int cell_x = x * 4 / ps;
      int cell_y = y * 4 / ps;
      desc[(cell_y * 4 + cell_x) * 8 + bin] += static_cast<float>(mag);
    }
  }
  auto l2 = [&] {
    double s = 0.0;
    for (float v : desc) s += static_cast<double>(v) * v;
    return std::sqrt(s);
  };
  double norm = l2();
  if (norm < 1e-12) return desc;  // constant patch: keep the zero vector
  for (float& v : desc) v = static_cast<float>(v / norm);
  for (float& v : desc) v = std::min(v, 0.2f);
  norm = l2();
  if (norm < 1e-12) return desc;
  for (float& v : desc) v = static_cast<float>(v / norm);
  return desc;
}

double squared_distance(const float* a, const float* b) {
  double s = 0.0;
  for (int i = 0; i < kDescriptorDim; ++i) {
    double d = static_cast<double>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

DescriptorGrid extract_dense_descriptors(const GrayImage& image, const SamplingSpec& spec) {
  if (image.width != spec.image_width() || image.height != spec.image_height())
    throw InvalidInput("image dimensions incompatible with sampling spec");
  const int ps = spec.patch_size;
  DescriptorGrid grid;
  grid.sampling = spec;
  grid.descriptors.reserve(spec.cell_count());
  grid.patches.reserve(spec.cell_count());
  for (int row = 0; row < spec.grid_h; ++row) {
    for (int col = 0; col < spec.grid_w; ++col) {
      std::vector<float> patch(static_cast<std::size_t>(ps) * ps);
      int ox = col * spec.stride, oy = row * spec.stride;
      for (int y = 0; y < ps; ++y)
        for (int x = 0; x < ps; ++x)
          patch[static_cast<std::size_t>(y) * ps + x] = image.at(ox + x, oy + y);
      grid.descriptors.push_back(describe_patch(patch, ps));
      grid.patches.push_back(std::move(patch));
    }
  }
  return grid;
}

Codebook train_codebook(const std::vector<DescriptorGrid>& sets, int k, int iters,
                        std::uint64_t seed) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (iters < 1) throw InvalidInput("iters must be >= 1");
  std::vector<const Descriptor*> points;
  std::vector<const std::vector<float>*> patches;
  int patch_size = sets.empty() ? 32 : sets.front().sampling.patch_size;
  for (const auto& set : sets) {
    if (set.sampling.patch_size != patch_size)
      throw InvalidInput("mixed patch sizes in training sets");
    for (std::size_t i = 0; i < set.descriptors.size(); ++i) {
      points.push_back(&set.descriptors[i]);
      patches.push_back(&set.patches[i]);
    }
  }
  const std::size_t n = points.size();
  if (static_cast<std::size_t>(k) > n)
    throw InvalidInput("k exceeds descriptor count");

  Rng rng(seed);
  Codebook cb;
  cb.k = k;
  cb.patch_size = patch_size;
  cb.centroids.assign(static_cast<std::size_t>(k) * kDescriptorDim, 0.0f);

  // k-means++ style seeding
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  auto set_centroid = [&](int c, const float* src) {
    std::copy(src, src + kDescriptorDim, cb.centroids.begin() + static_cast<std::size_t>(c) * kDescriptorDim);
  };
  std::size_t first = rng.next_below(n);
  set_centroid(0, points[first]->data());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = squared_distance(points[i]->data(), cb.centroid(c - 1));
      min_dist[i] = std::min(min_dist[i], d);
      total += min_dist[i];
    }
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.next_below(n);
    } else {
      double target = rng.next_double() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += min_dist[i];
        if (acc >= target) { pick = i; break; }
      }
    }
    set_centroid(c, points[pick]->data());
  }

  std::vector<int> assign(n, -1);
  auto nearest = [&](const float* p) {
    int best = 0;
    double best_d = squared_distance(p, cb.centroid(0));
    for (int c = 1; c < k; ++c) {
      double d = squared_distance(p, cb.centroid(c));
      if (d < best_d) { best_d = d; best = c; }
    }
    return best;
  };

  for (int iter = 0; iter < iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int c = nearest(points[i]->data());
      if (c != assign[i]) { assign[i] = c; changed = true; }
    }
    if (!changed) break;

    std::vector<double> sums(static_cast<std::size_t>(k) * kDescriptorDim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const float* p = points[i]->data();
      double* s = sums.data() + static_cast<std::size_t>(assign[i]) * kDescriptorDim;
      for (int d = 0; d < kDescriptorDim; ++d) s[d] += p[d];
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // reseed from the point farthest from its current centroid
        std::size_t far_idx = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          double d = squared_distance(points[i]->data(), cb.centroid(assign[i]));
          if (d > far_d) { far_d = d; far_idx = i; }
        }
        set_centroid(c, points[far_idx]->data());
      } else {
        float* dst = cb.centroids.data() + static_cast<std::size_t>(c) * kDescriptorDim;
        const double* s = sums.data() + static_cast<std::size_t>(c) * kDescriptorDim;
        for (int d = 0; d < kDescriptorDim; ++d)
          dst[d] = static_cast<float>(s[d] / static_cast<double>(counts[c]));
      }
    }
  }

  // final assignment pass, then patch means
  for (std::size_t i = 0; i < n; ++i) assign[i] = nearest(points[i]->data());
  const std::size_t patch_len = static_cast<std::size_t>(patch_size) * patch_size;
  std::vector<std::vector<double>> patch_sums(k, std::vector<double>(patch_len, 0.0));
  cb.train_counts.assign(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& sum = patch_sums[assign[i]];
    const auto& patch = *patches[i];
    for (std::size_t j = 0; j < patch_len; ++j) sum[j] += patch[j];
    ++cb.train_counts[assign[i]];
  }
  cb.mean_patches.assign(k, std::vector<float>(patch_len, 0.5f));
  for (int c = 0; c < k; ++c) {
    if (cb.train_counts[c] == 0) continue;
    for (std::size_t j = 0; j < patch_len; ++j)
      cb.mean_patches[c][j] = static_cast<float>(patch_sums[c][j] / cb.train_counts[c]);
  }
  return cb;
}

int quantize(const Descriptor& d, const Codebook& cb) {
  if (static_cast<int>(d.size()) != kDescriptorDim)
    throw InvalidInput("descriptor dimension mismatch");
  int best = 0;
  double best_d = squared_distance(d.data(), cb.centroid(0));
  for (int c = 1; c < cb.k; ++c) {
    double dist = squared_distance(d.data(), cb.centroid(c));
    if (dist < best_d) { best_d = dist; best = c; }
  }
  return best;
}

WordGrid quantize_grid(const DescriptorGrid& grid, const Codebook& cb) {
  WordGrid out;
  out.sampling = grid.sampling;
  out.labels.reserve(grid.descriptors.size());
  for (const auto& d : grid.descriptors) out.labels.push_back(quantize(d, cb));
  return out;
}

BovwHistogram pool(const WordGrid& grid, int k) {
  BovwHistogram hist;
  hist.counts.assign(k, 0);
  for (int label : grid.labels) {
    if (label < 0 || label >= k) throw InvalidInput("label out of range for pooling");
    ++hist.counts[label];
  }
  return hist;
}

}  // namespace bovw
