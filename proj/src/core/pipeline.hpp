#pragma once

#include <cstdint>
#include <vector>

#include "image.hpp"

namespace bovw {

inline constexpr int kDescriptorDim = 128;  // 4x4 spatial cells x 8 orientation bins

// Dense sampling geometry: square patches of patch_size pixels anchored every
// stride pixels. grid_w/grid_h are the resulting cell counts.
struct SamplingSpec {
  int patch_size = 32;
  int stride = 8;
  int grid_w = 0;
  int grid_h = 0;

  // Derives the grid for an image; throws InvalidInput unless the stride
  // divides (image_dim - patch_size) on both axes.
  static SamplingSpec for_image(int image_w, int image_h, int patch_size = 32, int stride = 8);

  // Grid of given shape (used when no source image exists, e.g. raw histograms).
  static SamplingSpec for_grid(int grid_w, int grid_h, int patch_size = 32, int stride = 8);

  int cell_count() const { return grid_w * grid_h; }
  int image_width() const { return (grid_w - 1) * stride + patch_size; }
  int image_height() const { return (grid_h - 1) * stride + patch_size; }

  bool operator==(const SamplingSpec&) const = default;
};

using Descriptor = std::vector<float>;  // length kDescriptorDim

// Descriptors plus their source patches, one per grid cell in row-major order.
struct DescriptorGrid {
  SamplingSpec sampling;
  std::vector<Descriptor> descriptors;
  std::vector<std::vector<float>> patches;  // patch_size^2 luminance values each
};

struct Codebook {
  int k = 0;
  int patch_size = 32;
  std::vector<float> centroids;                  // k * kDescriptorDim, row-major
  std::vector<std::vector<float>> mean_patches;  // k patches of patch_size^2 values
  std::vector<std::uint32_t> train_counts;       // cluster populations

  const float* centroid(int i) const { return centroids.data() + static_cast<std::size_t>(i) * kDescriptorDim; }
};

struct WordGrid {
  SamplingSpec sampling;
  std::vector<int> labels;  // grid_w * grid_h word indices, row-major
};

struct BovwHistogram {
  std::vector<std::uint32_t> counts;

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }
  bool operator==(const BovwHistogram&) const = default;
};

// Gradient-histogram descriptor per cell: finite-difference gradients over the
// patch, 8-bin orientation histogram weighted by magnitude per 8x8 sub-cell,
// L2 normalized, clipped at 0.2, renormalized. Constant patches give the zero
// vector.
DescriptorGrid extract_dense_descriptors(const GrayImage& image, const SamplingSpec& spec);

// Seeded k-means (k-means++-style init, Euclidean metric, stops on unchanged
// assignments or after `iters` rounds, empty clusters reseeded from the
// farthest point). mean_patches are accumulated from the final assignments;
// clusters that end up empty get a mid-gray patch.
Codebook train_codebook(const std::vector<DescriptorGrid>& sets, int k, int iters,
                        std::uint64_t seed);

// Index of the nearest centroid (Euclidean); ties break to the lowest index.
int quantize(const Descriptor& d, const Codebook& cb);

WordGrid quantize_grid(const DescriptorGrid& grid, const Codebook& cb);

// counts[i] = number of cells labeled i.
BovwHistogram pool(const WordGrid& grid, int k);

}  // namespace bovw
