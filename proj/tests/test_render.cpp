#include <algorithm>

#include "core/render.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bovw;

namespace {

Codebook toy_codebook(int k, int patch_size, std::uint64_t seed) {
  Codebook cb;
  cb.k = k;
  cb.patch_size = patch_size;
  cb.centroids.assign(static_cast<std::size_t>(k) * kDescriptorDim, 0.0f);
  cb.train_counts.assign(k, 1);
  Rng rng(seed);
  std::size_t len = static_cast<std::size_t>(patch_size) * patch_size;
  for (int c = 0; c < k; ++c) {
    std::vector<float> patch(len);
    for (auto& v : patch) v = static_cast<float>(rng.next_double());
    cb.mean_patches.push_back(std::move(patch));
  }
  return cb;
}

}  // namespace

TEST_CASE("single cell renders the mean patch exactly") {
  auto cb = toy_codebook(2, 8, 1);
  Layout l{SamplingSpec::for_grid(1, 1, 8, 4), {1}};
  GrayImage out = render_layout(l, cb);
  CHECK(out.width == 8);
  CHECK(out.height == 8);
  CHECK(out.pixels == cb.mean_patches[1]);
}

TEST_CASE("constant patches render a constant image") {
  Codebook cb = toy_codebook(1, 8, 2);
  std::fill(cb.mean_patches[0].begin(), cb.mean_patches[0].end(), 0.25f);
  Layout l{SamplingSpec::for_grid(3, 3, 8, 4), std::vector<int>(9, 0)};
  GrayImage out = render_layout(l, cb);
  for (float p : out.pixels) CHECK(p == doctest::Approx(0.25f));
}

TEST_CASE("1x2 overlap averages against a direct accumulation oracle") {
  auto cb = toy_codebook(2, 32, 3);
  Layout l{SamplingSpec::for_grid(2, 1, 32, 8), {0, 1}};
  GrayImage out = render_layout(l, cb);
  REQUIRE(out.width == 40);
  REQUIRE(out.height == 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 40; ++x) {
      double sum = 0.0;
      int hits = 0;
      if (x < 32) {
        sum += cb.mean_patches[0][static_cast<std::size_t>(y) * 32 + x];
        ++hits;
      }
      if (x >= 8) {
        sum += cb.mean_patches[1][static_cast<std::size_t>(y) * 32 + (x - 8)];
        ++hits;
      }
      CHECK(out.at(x, y) == doctest::Approx(sum / hits).epsilon(1e-6));
    }
  }
}

TEST_CASE("rendered pixels stay in range") {
  auto cb = toy_codebook(4, 16, 4);
  Rng rng(5);
  std::vector<int> labels;
  for (int i = 0; i < 16; ++i) labels.push_back(static_cast<int>(rng.next_below(4)));
  Layout l{SamplingSpec::for_grid(4, 4, 16, 8), labels};
  GrayImage out = render_layout(l, cb);
  for (float p : out.pixels) {
    CHECK(p >= 0.0f);
    CHECK(p <= 1.0f);
  }
}

TEST_CASE("render validates its inputs") {
  auto cb = toy_codebook(2, 8, 6);
  Layout bad_patch{SamplingSpec::for_grid(1, 1, 16, 8), {0}};
  CHECK_THROWS_AS(render_layout(bad_patch, cb), InvalidInput);
  Layout bad_label{SamplingSpec::for_grid(1, 1, 8, 8), {2}};
  CHECK_THROWS_AS(render_layout(bad_label, cb), InvalidInput);
}
