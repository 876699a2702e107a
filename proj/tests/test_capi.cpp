// End-to-end smoke test of the shared-library C interface.
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "bovwrec.h"
#include "doctest.h"

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / "bovw_capi_test";
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const char* name) const { return (path / name).string(); }
};

std::vector<float> noise_pixels(int w, int h, std::uint64_t seed) {
  std::vector<float> pixels(static_cast<std::size_t>(w) * h);
  std::uint64_t state = seed;
  for (auto& p : pixels) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    p = static_cast<float>(state >> 40) / static_cast<float>(1 << 24);
  }
  return pixels;
}

}  // namespace

TEST_CASE("C API round trip: train, learn, solve, render, measure") {
  TempDir tmp;
  CHECK(std::string(bvw_version()).size() > 0);

  auto pixels = noise_pixels(64, 64, 1);
  bvw_image* img = nullptr;
  REQUIRE(bvw_image_create(64, 64, pixels.data(), &img) == BVW_OK);
  CHECK(bvw_image_width(img) == 64);
  CHECK(bvw_image_height(img) == 64);

  const bvw_image* images[1] = {img};
  bvw_codebook* cb = nullptr;
  REQUIRE(bvw_codebook_train(images, 1, 4, 10, 0, 32, 8, &cb) == BVW_OK);
  CHECK(bvw_codebook_k(cb) == 4);
  CHECK(bvw_codebook_patch_size(cb) == 32);

  std::string cb_path = tmp.file("cb.bin");
  REQUIRE(bvw_codebook_save(cb, cb_path.c_str()) == BVW_OK);
  bvw_codebook* cb2 = nullptr;
  REQUIRE(bvw_codebook_load(cb_path.c_str(), &cb2) == BVW_OK);
  CHECK(bvw_codebook_k(cb2) == 4);

  bvw_grid* grid = nullptr;
  REQUIRE(bvw_extract_grid(img, cb, 8, &grid) == BVW_OK);
  CHECK(bvw_grid_width(grid) == 5);
  CHECK(bvw_grid_height(grid) == 5);
  REQUIRE(bvw_grid_labels(grid) != nullptr);

  uint32_t counts[4];
  REQUIRE(bvw_grid_pool(grid, 4, counts) == BVW_OK);
  uint32_t total = 0;
  for (uint32_t c : counts) total += c;
  CHECK(total == 25);

  const bvw_grid* grids[1] = {grid};
  bvw_adjacency* adjacency = nullptr;
  bvw_position* position = nullptr;
  REQUIRE(bvw_learn_costs(grids, 1, 4, 3, 0, 0, 32, 8, &adjacency, &position) == BVW_OK);
  CHECK(bvw_adjacency_k(adjacency) == 4);
  CHECK(bvw_adjacency_m(adjacency) == 48);
  CHECK(bvw_position_n(position) == 25);
  double v = 0.0;
  REQUIRE(bvw_adjacency_at(adjacency, 0, 1, 0, &v) == BVW_OK);
  CHECK(v > 0.0);

  bvw_grid* layout = nullptr;
  double objective = 0.0;
  REQUIRE(bvw_solve(counts, 4, 5, 5, 32, 8, adjacency, position, "gahc", 0.8, 1, 10, 0.2,
                    100, &layout, &objective) == BVW_OK);
  double check_obj = 0.0;
  REQUIRE(bvw_objective(layout, adjacency, position, 0.8, &check_obj) == BVW_OK);
  CHECK(objective == doctest::Approx(check_obj).epsilon(1e-9));

  bvw_image* rendered = nullptr;
  REQUIRE(bvw_render(layout, cb, &rendered) == BVW_OK);
  CHECK(bvw_image_width(rendered) == 64);

  double dc = -1.0, nc = -1.0, xc = -2.0;
  REQUIRE(bvw_direct_comparison(layout, grid, &dc) == BVW_OK);
  CHECK(dc >= 0.0);
  CHECK(dc <= 1.0);
  REQUIRE(bvw_neighbor_comparison(layout, grid, &nc) == BVW_OK);
  CHECK(nc >= 0.0);
  CHECK(nc <= 1.0);
  REQUIRE(bvw_xcorr(rendered, img, &xc) == BVW_OK);
  CHECK(xc >= -1.0);
  CHECK(xc <= 1.0);
  double xc4 = 0.0;
  REQUIRE(bvw_xcorr_shift(rendered, img, 4, &xc4) == BVW_OK);
  CHECK(xc4 >= xc - 1e-12);

  bvw_image_free(rendered);
  bvw_grid_free(layout);
  bvw_position_free(position);
  bvw_adjacency_free(adjacency);
  bvw_grid_free(grid);
  bvw_codebook_free(cb2);
  bvw_codebook_free(cb);
  bvw_image_free(img);
}

TEST_CASE("C API error reporting") {
  bvw_image* img = nullptr;
  CHECK(bvw_image_load("/nonexistent/path.pgm", &img) == BVW_ERR_IO);
  CHECK(std::string(bvw_last_error()).size() > 0);
  CHECK(img == nullptr);

  CHECK(bvw_image_create(0, 5, nullptr, &img) == BVW_ERR_INVALID);

  // mismatched histogram total
  uint32_t counts[2] = {1, 1};
  bvw_adjacency* adjacency = nullptr;
  bvw_position* position = nullptr;
  REQUIRE(bvw_learn_costs(nullptr, 0, 2, 1, 2, 2, 32, 8, &adjacency, &position) == BVW_OK);
  bvw_grid* layout = nullptr;
  CHECK(bvw_solve(counts, 2, 2, 2, 32, 8, adjacency, position, "gahc", 0.8, 0, 10, 0.2, 10,
                  &layout, nullptr) == BVW_ERR_INVALID);
  CHECK(bvw_solve(counts, 2, 1, 2, 32, 8, adjacency, position, "nope", 0.8, 0, 10, 0.2, 10,
                  &layout, nullptr) == BVW_ERR_INVALID);
  bvw_position_free(position);
  bvw_adjacency_free(adjacency);
}

TEST_CASE("C API applications") {
  uint32_t ws[3] = {2, 0, 0};
  uint32_t wt[3] = {0, 1, 1};
  uint32_t* seq = nullptr;
  int steps = 0;
  REQUIRE(bvw_morph(ws, wt, 3, 5, &seq, &steps) == BVW_OK);
  CHECK(steps == 3);
  CHECK(std::memcmp(seq, ws, sizeof(ws)) == 0);
  CHECK(std::memcmp(seq + 2 * 3, wt, sizeof(wt)) == 0);
  bvw_free(seq);

  double weights[2] = {3.0, 4.0};
  uint32_t counts[2];
  REQUIRE(bvw_classifier_to_bovw(weights, 2, 7, counts) == BVW_OK);
  CHECK(counts[0] == 3);
  CHECK(counts[1] == 4);
}
