#include "bovwrec.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "../core/apps.hpp"
#include "../core/metrics.hpp"
#include "../core/render.hpp"
#include "../core/serialize.hpp"

struct bvw_image {
  bovw::GrayImage img;
};
struct bvw_codebook {
  bovw::Codebook cb;
};
struct bvw_grid {
  bovw::WordGrid grid;
};
struct bvw_adjacency {
  bovw::AdjacencyCost cost;
};
struct bvw_position {
  bovw::PositionCost cost;
};
struct bvw_corpus {
  bovw::CaptionCorpus corpus;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what;
  return code;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return BVW_OK;
  } catch (const bovw::InvalidInput& e) {
    return fail(BVW_ERR_INVALID, e.what());
  } catch (const bovw::IoError& e) {
    return fail(BVW_ERR_IO, e.what());
  } catch (const bovw::NotFound& e) {
    return fail(BVW_ERR_NOT_FOUND, e.what());
  } catch (const std::exception& e) {
    return fail(BVW_ERR_INVALID, e.what());
  }
}

int require(bool ok, const char* what) {
  return ok ? BVW_OK : fail(BVW_ERR_INVALID, what);
}

bovw::Layout as_layout(const bovw::WordGrid& grid) {
  return bovw::Layout{grid.sampling, grid.labels};
}

}  // namespace

extern "C" {

const char* bvw_version(void) { return "0.1.0"; }

const char* bvw_last_error(void) { return g_last_error.c_str(); }

void bvw_free(void* ptr) { std::free(ptr); }

/* ---- images ---- */

int bvw_image_load(const char* path, bvw_image** out) {
  if (int rc = require(path && out, "null argument")) return rc;
  return guarded([&] { *out = new bvw_image{bovw::load_pnm(path)}; });
}

int bvw_image_create(int width, int height, const float* pixels, bvw_image** out) {
  if (int rc = require(pixels && out && width > 0 && height > 0, "bad image arguments"))
    return rc;
  return guarded([&] {
    bovw::GrayImage img(width, height);
    std::memcpy(img.pixels.data(), pixels, img.pixels.size() * sizeof(float));
    *out = new bvw_image{std::move(img)};
  });
}

int bvw_image_save_pgm(const bvw_image* img, const char* path) {
  if (int rc = require(img && path, "null argument")) return rc;
  return guarded([&] { bovw::save_pgm(img->img, path); });
}

int bvw_image_width(const bvw_image* img) { return img ? img->img.width : 0; }
int bvw_image_height(const bvw_image* img) { return img ? img->img.height : 0; }
const float* bvw_image_pixels(const bvw_image* img) {
  return img ? img->img.pixels.data() : nullptr;
}
void bvw_image_free(bvw_image* img) { delete img; }

/* ---- codebook ---- */

int bvw_codebook_train(const bvw_image* const* images, int image_count, int k, int iters,
                       uint64_t seed, int patch_size, int stride, bvw_codebook** out) {
  if (int rc = require(images && out && image_count > 0, "need at least one image")) return rc;
  return guarded([&] {
    std::vector<bovw::DescriptorGrid> sets;
    sets.reserve(image_count);
    for (int i = 0; i < image_count; ++i) {
      auto spec = bovw::SamplingSpec::for_image(images[i]->img.width, images[i]->img.height,
                                                patch_size, stride);
      sets.push_back(bovw::extract_dense_descriptors(images[i]->img, spec));
    }
    *out = new bvw_codebook{bovw::train_codebook(sets, k, iters, seed)};
  });
}

int bvw_codebook_save(const bvw_codebook* cb, const char* path) {
  if (int rc = require(cb && path, "null argument")) return rc;
  return guarded([&] { bovw::save_codebook(cb->cb, path); });
}

int bvw_codebook_load(const char* path, bvw_codebook** out) {
  if (int rc = require(path && out, "null argument")) return rc;
  return guarded([&] { *out = new bvw_codebook{bovw::load_codebook(path)}; });
}

int bvw_codebook_k(const bvw_codebook* cb) { return cb ? cb->cb.k : 0; }
int bvw_codebook_patch_size(const bvw_codebook* cb) { return cb ? cb->cb.patch_size : 0; }
void bvw_codebook_free(bvw_codebook* cb) { delete cb; }

/* ---- grids ---- */

int bvw_extract_grid(const bvw_image* img, const bvw_codebook* cb, int stride,
                     bvw_grid** out) {
  if (int rc = require(img && cb && out, "null argument")) return rc;
  return guarded([&] {
    auto spec = bovw::SamplingSpec::for_image(img->img.width, img->img.height,
                                              cb->cb.patch_size, stride);
    auto descriptors = bovw::extract_dense_descriptors(img->img, spec);
    *out = new bvw_grid{bovw::quantize_grid(descriptors, cb->cb)};
  });
}

int bvw_grid_create(int grid_w, int grid_h, int patch_size, int stride,
                    const int32_t* labels, bvw_grid** out) {
  if (int rc = require(labels && out, "null argument")) return rc;
  return guarded([&] {
    auto spec = bovw::SamplingSpec::for_grid(grid_w, grid_h, patch_size, stride);
    bovw::WordGrid grid;
    grid.sampling = spec;
    grid.labels.assign(labels, labels + spec.cell_count());
    *out = new bvw_grid{std::move(grid)};
  });
}

int bvw_grid_width(const bvw_grid* grid) { return grid ? grid->grid.sampling.grid_w : 0; }
int bvw_grid_height(const bvw_grid* grid) { return grid ? grid->grid.sampling.grid_h : 0; }
const int32_t* bvw_grid_labels(const bvw_grid* grid) {
  static_assert(sizeof(int) == sizeof(int32_t));
  return grid ? reinterpret_cast<const int32_t*>(grid->grid.labels.data()) : nullptr;
}

int bvw_grid_pool(const bvw_grid* grid, int k, uint32_t* counts) {
  if (int rc = require(grid && counts && k > 0, "bad pool arguments")) return rc;
  return guarded([&] {
    bovw::BovwHistogram hist = bovw::pool(grid->grid, k);
    std::memcpy(counts, hist.counts.data(), hist.counts.size() * sizeof(uint32_t));
  });
}

void bvw_grid_free(bvw_grid* grid) { delete grid; }

/* ---- cost learning ---- */

int bvw_learn_costs(const bvw_grid* const* grids, int grid_count, int k, int radius,
                    int grid_w, int grid_h, int patch_size, int stride,
                    bvw_adjacency** adjacency_out, bvw_position** position_out) {
  if (int rc = require(adjacency_out && position_out && grid_count >= 0 &&
                           (grid_count == 0 || grids),
                       "bad cost-learning arguments"))
    return rc;
  return guarded([&] {
    std::vector<bovw::WordGrid> corpus;
    corpus.reserve(grid_count);
    for (int i = 0; i < grid_count; ++i) corpus.push_back(grids[i]->grid);
    auto spec = corpus.empty()
                    ? bovw::SamplingSpec::for_grid(grid_w, grid_h, patch_size, stride)
                    : corpus.front().sampling;
    auto offsets = bovw::OffsetSet::square(radius);
    auto adjacency = bovw::learn_adjacency_cost(corpus, k, offsets);
    auto position = bovw::learn_position_cost(corpus, k, spec);
    *adjacency_out = new bvw_adjacency{std::move(adjacency)};
    *position_out = new bvw_position{std::move(position)};
  });
}

int bvw_adjacency_save(const bvw_adjacency* cost, const char* path) {
  if (int rc = require(cost && path, "null argument")) return rc;
  return guarded([&] { bovw::save_adjacency_cost(cost->cost, path); });
}

int bvw_adjacency_load(const char* path, bvw_adjacency** out) {
  if (int rc = require(path && out, "null argument")) return rc;
  return guarded([&] { *out = new bvw_adjacency{bovw::load_adjacency_cost(path)}; });
}

int bvw_adjacency_k(const bvw_adjacency* cost) { return cost ? cost->cost.k : 0; }
int bvw_adjacency_m(const bvw_adjacency* cost) { return cost ? cost->cost.offsets.size() : 0; }

int bvw_adjacency_at(const bvw_adjacency* cost, int i, int j, int d, double* out) {
  if (int rc = require(cost && out, "null argument")) return rc;
  if (int rc = require(i >= 0 && i < cost->cost.k && j >= 0 && j < cost->cost.k && d >= 0 &&
                           d < cost->cost.offsets.size(),
                       "index out of range"))
    return rc;
  *out = cost->cost.at(i, j, d);
  return BVW_OK;
}

void bvw_adjacency_free(bvw_adjacency* cost) { delete cost; }

int bvw_position_save(const bvw_position* cost, const char* path) {
  if (int rc = require(cost && path, "null argument")) return rc;
  return guarded([&] { bovw::save_position_cost(cost->cost, path); });
}

int bvw_position_load(const char* path, bvw_position** out) {
  if (int rc = require(path && out, "null argument")) return rc;
  return guarded([&] { *out = new bvw_position{bovw::load_position_cost(path)}; });
}

int bvw_position_k(const bvw_position* cost) { return cost ? cost->cost.k : 0; }
int bvw_position_n(const bvw_position* cost) { return cost ? cost->cost.n : 0; }

int bvw_position_at(const bvw_position* cost, int i, int place, double* out) {
  if (int rc = require(cost && out, "null argument")) return rc;
  if (int rc = require(i >= 0 && i < cost->cost.k && place >= 0 && place < cost->cost.n,
                       "index out of range"))
    return rc;
  *out = cost->cost.at(i, place);
  return BVW_OK;
}

void bvw_position_free(bvw_position* cost) { delete cost; }

/* ---- solving ---- */

int bvw_solve(const uint32_t* counts, int k, int grid_w, int grid_h, int patch_size,
              int stride, const bvw_adjacency* adjacency, const bvw_position* position,
              const char* solver, double lambda, uint64_t seed, int population,
              double replace_prob, int max_generations, bvw_grid** layout_out,
              double* objective_out) {
  if (int rc = require(counts && adjacency && position && solver && layout_out && k > 0,
                       "bad solver arguments"))
    return rc;
  return guarded([&] {
    bovw::BovwHistogram hist;
    hist.counts.assign(counts, counts + k);
    auto spec = bovw::SamplingSpec::for_grid(grid_w, grid_h, patch_size, stride);
    bovw::SolverConfig config;
    config.lambda = lambda;
    config.seed = seed;
    config.population = population;
    config.replace_prob = replace_prob;
    config.max_generations = max_generations;

    bovw::Layout layout;
    std::string name = solver;
    if (name == "rand") {
      layout = bovw::random_layout(hist, spec, seed);
    } else if (name == "hc") {
      layout = bovw::hill_climb(bovw::random_layout(hist, spec, seed), adjacency->cost,
                                position->cost, lambda);
    } else if (name == "sa") {
      layout = bovw::simulated_annealing(hist, spec, adjacency->cost, position->cost, config);
    } else if (name == "gahc") {
      layout = bovw::ga_hc_solve(hist, spec, adjacency->cost, position->cost, config);
    } else if (name == "brute") {
      layout = bovw::brute_force_solve(hist, spec, adjacency->cost, position->cost, lambda);
    } else {
      throw bovw::InvalidInput("unknown solver: " + name);
    }
    if (objective_out)
      *objective_out = bovw::objective(layout, adjacency->cost, position->cost, lambda);
    *layout_out = new bvw_grid{bovw::WordGrid{layout.sampling, std::move(layout.labels)}};
  });
}

int bvw_objective(const bvw_grid* layout, const bvw_adjacency* adjacency,
                  const bvw_position* position, double lambda, double* out) {
  if (int rc = require(layout && adjacency && position && out, "null argument")) return rc;
  return guarded([&] {
    *out = bovw::objective(as_layout(layout->grid), adjacency->cost, position->cost, lambda);
  });
}

/* ---- rendering and metrics ---- */

int bvw_render(const bvw_grid* layout, const bvw_codebook* cb, bvw_image** out) {
  if (int rc = require(layout && cb && out, "null argument")) return rc;
  return guarded([&] {
    *out = new bvw_image{bovw::render_layout(as_layout(layout->grid), cb->cb)};
  });
}

int bvw_xcorr(const bvw_image* a, const bvw_image* b, double* out) {
  if (int rc = require(a && b && out, "null argument")) return rc;
  return guarded([&] { *out = bovw::xcorr(a->img, b->img); });
}

int bvw_xcorr_shift(const bvw_image* a, const bvw_image* b, int max_shift, double* out) {
  if (int rc = require(a && b && out, "null argument")) return rc;
  return guarded([&] { *out = bovw::xcorr_shift(a->img, b->img, max_shift); });
}

int bvw_direct_comparison(const bvw_grid* layout, const bvw_grid* truth, double* out) {
  if (int rc = require(layout && truth && out, "null argument")) return rc;
  return guarded([&] { *out = bovw::direct_comparison(as_layout(layout->grid), truth->grid); });
}

int bvw_neighbor_comparison(const bvw_grid* layout, const bvw_grid* truth, double* out) {
  if (int rc = require(layout && truth && out, "null argument")) return rc;
  return guarded(
      [&] { *out = bovw::neighbor_comparison(as_layout(layout->grid), truth->grid); });
}

/* ---- histogram and classifier files ---- */

int bvw_histogram_save(const char* path, const uint32_t* counts, int k) {
  if (int rc = require(path && counts && k > 0, "bad histogram arguments")) return rc;
  return guarded([&] {
    bovw::BovwHistogram hist;
    hist.counts.assign(counts, counts + k);
    bovw::save_histogram(hist, path);
  });
}

int bvw_histogram_load(const char* path, uint32_t** counts_out, int* k_out) {
  if (int rc = require(path && counts_out && k_out, "null argument")) return rc;
  return guarded([&] {
    bovw::BovwHistogram hist = bovw::load_histogram(path);
    auto* buf = static_cast<uint32_t*>(std::malloc(hist.counts.size() * sizeof(uint32_t)));
    if (!buf) throw bovw::IoError("out of memory");
    std::memcpy(buf, hist.counts.data(), hist.counts.size() * sizeof(uint32_t));
    *counts_out = buf;
    *k_out = static_cast<int>(hist.counts.size());
  });
}

int bvw_classifier_load(const char* path, double** weights_out, int* k_out, double* bias_out) {
  if (int rc = require(path && weights_out && k_out, "null argument")) return rc;
  return guarded([&] {
    bovw::LinearClassifier clf = bovw::load_classifier(path);
    auto* buf = static_cast<double*>(std::malloc(clf.weights.size() * sizeof(double)));
    if (!buf) throw bovw::IoError("out of memory");
    std::memcpy(buf, clf.weights.data(), clf.weights.size() * sizeof(double));
    *weights_out = buf;
    *k_out = static_cast<int>(clf.weights.size());
    if (bias_out) *bias_out = clf.bias;
  });
}

/* ---- applications ---- */

int bvw_morph(const uint32_t* ws, const uint32_t* wt, int k, uint64_t seed,
              uint32_t** sequence_out, int* steps_out) {
  if (int rc = require(ws && wt && sequence_out && steps_out && k > 0, "bad morph arguments"))
    return rc;
  return guarded([&] {
    bovw::BovwHistogram hs, ht;
    hs.counts.assign(ws, ws + k);
    ht.counts.assign(wt, wt + k);
    auto seq = bovw::morph_sequence(hs, ht, seed);
    auto* buf =
        static_cast<uint32_t*>(std::malloc(seq.size() * static_cast<std::size_t>(k) * 4));
    if (!buf) throw bovw::IoError("out of memory");
    for (std::size_t i = 0; i < seq.size(); ++i)
      std::memcpy(buf + i * k, seq[i].counts.data(), static_cast<std::size_t>(k) * 4);
    *sequence_out = buf;
    *steps_out = static_cast<int>(seq.size());
  });
}

int bvw_classifier_to_bovw(const double* weights, int k, int n, uint32_t* counts_out) {
  if (int rc = require(weights && counts_out && k > 0, "bad inversion arguments")) return rc;
  return guarded([&] {
    bovw::LinearClassifier clf;
    clf.weights.assign(weights, weights + k);
    bovw::BovwHistogram hist = bovw::classifier_to_bovw(clf, n);
    std::memcpy(counts_out, hist.counts.data(), hist.counts.size() * sizeof(uint32_t));
  });
}

int bvw_corpus_load(const char* path, bvw_corpus** out) {
  if (int rc = require(path && out, "null argument")) return rc;
  return guarded([&] { *out = new bvw_corpus{bovw::load_caption_corpus(path)}; });
}

int bvw_corpus_k(const bvw_corpus* corpus) {
  if (!corpus || corpus->corpus.entries.empty()) return 0;
  return static_cast<int>(corpus->corpus.entries.front().hist.counts.size());
}

int bvw_corpus_has_word(const bvw_corpus* corpus, const char* word) {
  if (!corpus || !word) return 0;
  for (const auto& entry : corpus->corpus.entries)
    if (entry.words.count(word)) return 1;
  return 0;
}

int bvw_word_direction(const bvw_corpus* corpus, const char* word, double* direction_out) {
  if (int rc = require(corpus && word && direction_out, "null argument")) return rc;
  return guarded([&] {
    auto u = bovw::word_to_bovw_direction(word, corpus->corpus);
    std::memcpy(direction_out, u.data(), u.size() * sizeof(double));
  });
}

int bvw_sentence_to_bovw(const bvw_corpus* corpus, const char* const* words, int word_count,
                         int n, uint32_t* counts_out) {
  if (int rc = require(corpus && words && counts_out && word_count > 0,
                       "bad sentence arguments"))
    return rc;
  return guarded([&] {
    std::vector<std::string> sentence(words, words + word_count);
    bovw::BovwHistogram hist = bovw::sentence_to_bovw(sentence, corpus->corpus, n);
    std::memcpy(counts_out, hist.counts.data(), hist.counts.size() * sizeof(uint32_t));
  });
}

void bvw_corpus_free(bvw_corpus* corpus) { delete corpus; }

}  // extern "C"
