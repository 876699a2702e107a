#include <cmath>
#include <numeric>

#include "core/pipeline.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bovw;

TEST_CASE("sampling spec derivation") {
  auto spec = SamplingSpec::for_image(128, 128);
  CHECK(spec.grid_w == 13);
  CHECK(spec.grid_h == 13);
  CHECK(spec.cell_count() == 169);
  CHECK(spec.image_width() == 128);
  CHECK(spec.image_height() == 128);

  CHECK(SamplingSpec::for_image(40, 64).grid_w == 2);
  CHECK(SamplingSpec::for_image(40, 64).grid_h == 5);
  CHECK_THROWS_AS(SamplingSpec::for_image(41, 64), InvalidInput);
  CHECK_THROWS_AS(SamplingSpec::for_image(16, 16), InvalidInput);  // smaller than patch
}

TEST_CASE("descriptor normalization and clipping") {
  auto img = testutil::random_image(32, 32, 11);
  auto spec = SamplingSpec::for_image(32, 32);
  auto grid = extract_dense_descriptors(img, spec);
  REQUIRE(grid.descriptors.size() == 1);
  const auto& d = grid.descriptors[0];
  REQUIRE(static_cast<int>(d.size()) == kDescriptorDim);
  double norm = 0.0;
  for (float v : d) {
    CHECK(v >= 0.0f);
    CHECK(v <= 0.2f + 1e-6f);
    norm += static_cast<double>(v) * v;
  }
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("constant patch yields the zero descriptor") {
  GrayImage img(32, 32, 0.7f);
  auto grid = extract_dense_descriptors(img, SamplingSpec::for_image(32, 32));
  for (float v : grid.descriptors[0]) CHECK(v == 0.0f);
}

TEST_CASE("patches are copied in row-major grid order") {
  auto img = testutil::random_image(40, 40, 5);
  auto spec = SamplingSpec::for_image(40, 40);  // 2x2 grid
  auto grid = extract_dense_descriptors(img, spec);
  REQUIRE(grid.patches.size() == 4);
  // cell (1,1) anchors at (8,8)
  CHECK(grid.patches[3][0] == img.at(8, 8));
  CHECK(grid.patches[0][33] == img.at(1, 1));
}

TEST_CASE("quantize matches a linear-scan oracle and ties break low") {
  Rng rng(99);
  Codebook cb;
  cb.k = 7;
  cb.centroids.resize(7 * kDescriptorDim);
  for (auto& v : cb.centroids) v = static_cast<float>(rng.next_double());
  for (int trial = 0; trial < 50; ++trial) {
    Descriptor d(kDescriptorDim);
    for (auto& v : d) v = static_cast<float>(rng.next_double());
    int best = 0;
    double best_dist = 1e300;
    for (int c = 0; c < cb.k; ++c) {
      double dist = 0.0;
      for (int i = 0; i < kDescriptorDim; ++i) {
        double diff = static_cast<double>(d[i]) - cb.centroid(c)[i];
        dist += diff * diff;
      }
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    CHECK(quantize(d, cb) == best);
  }

  // duplicate centroids: the lower index wins
  std::copy(cb.centroids.begin(), cb.centroids.begin() + kDescriptorDim,
            cb.centroids.begin() + 3 * kDescriptorDim);
  Descriptor d(cb.centroids.begin(), cb.centroids.begin() + kDescriptorDim);
  CHECK(quantize(d, cb) == 0);
}

TEST_CASE("k-means with one cluster averages everything") {
  auto img = testutil::random_image(48, 48, 21);
  auto spec = SamplingSpec::for_image(48, 48);  // 3x3 grid
  auto grid = extract_dense_descriptors(img, spec);
  auto cb = train_codebook({grid}, 1, 20, 0);
  REQUIRE(cb.k == 1);
  CHECK(cb.train_counts[0] == 9);
  for (int i = 0; i < kDescriptorDim; ++i) {
    double mean = 0.0;
    for (const auto& d : grid.descriptors) mean += d[i];
    mean /= 9.0;
    CHECK(cb.centroids[i] == doctest::Approx(mean).epsilon(1e-5));
  }
  for (std::size_t j = 0; j < cb.mean_patches[0].size(); ++j) {
    double mean = 0.0;
    for (const auto& p : grid.patches) mean += p[j];
    mean /= 9.0;
    CHECK(cb.mean_patches[0][j] == doctest::Approx(mean).epsilon(1e-5));
  }
}

TEST_CASE("k-means is deterministic per seed and validates k") {
  auto img = testutil::random_image(64, 64, 33);
  auto grid = extract_dense_descriptors(img, SamplingSpec::for_image(64, 64));
  auto a = train_codebook({grid}, 4, 15, 123);
  auto b = train_codebook({grid}, 4, 15, 123);
  CHECK(a.centroids == b.centroids);
  CHECK(a.mean_patches == b.mean_patches);
  CHECK(a.train_counts == b.train_counts);
  CHECK_THROWS_AS(train_codebook({grid}, 100, 5, 0), InvalidInput);  // k > #descriptors
  CHECK_THROWS_AS(train_codebook({grid}, 0, 5, 0), InvalidInput);
}

TEST_CASE("every cluster of a converged codebook is its members' mean") {
  auto img = testutil::random_image(64, 64, 7);
  auto grid = extract_dense_descriptors(img, SamplingSpec::for_image(64, 64));
  auto cb = train_codebook({grid}, 3, 50, 9);
  auto words = quantize_grid(grid, cb);
  std::vector<std::vector<double>> sums(3, std::vector<double>(kDescriptorDim, 0.0));
  std::vector<int> counts(3, 0);
  for (std::size_t i = 0; i < grid.descriptors.size(); ++i) {
    ++counts[words.labels[i]];
    for (int j = 0; j < kDescriptorDim; ++j) sums[words.labels[i]][j] += grid.descriptors[i][j];
  }
  for (int c = 0; c < 3; ++c) {
    REQUIRE(counts[c] == static_cast<int>(cb.train_counts[c]));
    if (counts[c] == 0) continue;
    for (int j = 0; j < kDescriptorDim; ++j)
      CHECK(cb.centroids[c * kDescriptorDim + j] ==
            doctest::Approx(sums[c][j] / counts[c]).epsilon(1e-4));
  }
}

TEST_CASE("pooling counts labels and validates range") {
  WordGrid grid;
  grid.sampling = SamplingSpec::for_grid(2, 2);
  grid.labels = {0, 2, 2, 1};
  auto hist = pool(grid, 4);
  CHECK(hist.counts == std::vector<std::uint32_t>{1, 1, 2, 0});
  CHECK(hist.total() == 4);
  grid.labels[0] = 4;
  CHECK_THROWS_AS(pool(grid, 4), InvalidInput);
}
