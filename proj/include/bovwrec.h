/* C interface to the bovwrec reconstruction library.
 *
 * All functions return a status code (BVW_OK on success) and deliver results
 * through out-parameters. On failure the out-parameters are untouched and
 * bvw_last_error() returns a message describing the most recent failure on
 * the calling thread. Objects returned through handle out-parameters are
 * owned by the caller and released with the matching _free function; buffers
 * allocated by the library are released with bvw_free().
 */
#ifndef BOVWREC_H
#define BOVWREC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define BVW_OK 0
#define BVW_ERR_INVALID 1 /* precondition violated */
#define BVW_ERR_IO 2      /* file read/write failure */
#define BVW_ERR_NOT_FOUND 3

typedef struct bvw_image bvw_image;
typedef struct bvw_codebook bvw_codebook;
typedef struct bvw_grid bvw_grid; /* word labels on a sampling grid */
typedef struct bvw_adjacency bvw_adjacency;
typedef struct bvw_position bvw_position;
typedef struct bvw_corpus bvw_corpus; /* caption corpus */

const char* bvw_version(void);
const char* bvw_last_error(void);
void bvw_free(void* ptr);

/* ---- images (PGM/PPM, luminance in [0,1]) ---- */
int bvw_image_load(const char* path, bvw_image** out);
int bvw_image_create(int width, int height, const float* pixels, bvw_image** out);
int bvw_image_save_pgm(const bvw_image* img, const char* path);
int bvw_image_width(const bvw_image* img);
int bvw_image_height(const bvw_image* img);
const float* bvw_image_pixels(const bvw_image* img);
void bvw_image_free(bvw_image* img);

/* ---- codebook ---- */
int bvw_codebook_train(const bvw_image* const* images, int image_count, int k, int iters,
                       uint64_t seed, int patch_size, int stride, bvw_codebook** out);
int bvw_codebook_save(const bvw_codebook* cb, const char* path);
int bvw_codebook_load(const char* path, bvw_codebook** out);
int bvw_codebook_k(const bvw_codebook* cb);
int bvw_codebook_patch_size(const bvw_codebook* cb);
void bvw_codebook_free(bvw_codebook* cb);

/* ---- dense extraction and grids ---- */
int bvw_extract_grid(const bvw_image* img, const bvw_codebook* cb, int stride,
                     bvw_grid** out);
int bvw_grid_create(int grid_w, int grid_h, int patch_size, int stride,
                    const int32_t* labels, bvw_grid** out);
int bvw_grid_width(const bvw_grid* grid);
int bvw_grid_height(const bvw_grid* grid);
const int32_t* bvw_grid_labels(const bvw_grid* grid);
/* counts must hold k entries */
int bvw_grid_pool(const bvw_grid* grid, int k, uint32_t* counts);
void bvw_grid_free(bvw_grid* grid);

/* ---- cost learning ---- */
/* radius selects the square offset neighborhood ((2r+1)^2 - 1 displacements).
 * grid_w/grid_h/patch_size/stride describe the place grid; they are required
 * when grid_count is 0 and must match the grids otherwise. */
int bvw_learn_costs(const bvw_grid* const* grids, int grid_count, int k, int radius,
                    int grid_w, int grid_h, int patch_size, int stride,
                    bvw_adjacency** adjacency_out, bvw_position** position_out);
int bvw_adjacency_save(const bvw_adjacency* cost, const char* path);
int bvw_adjacency_load(const char* path, bvw_adjacency** out);
int bvw_adjacency_k(const bvw_adjacency* cost);
int bvw_adjacency_m(const bvw_adjacency* cost);
int bvw_adjacency_at(const bvw_adjacency* cost, int i, int j, int d, double* out);
void bvw_adjacency_free(bvw_adjacency* cost);
int bvw_position_save(const bvw_position* cost, const char* path);
int bvw_position_load(const char* path, bvw_position** out);
int bvw_position_k(const bvw_position* cost);
int bvw_position_n(const bvw_position* cost);
int bvw_position_at(const bvw_position* cost, int i, int place, double* out);
void bvw_position_free(bvw_position* cost);

/* ---- solving ---- */
/* solver: "rand" | "hc" | "sa" | "gahc" | "brute". counts must hold k entries
 * summing to grid_w*grid_h. The result grid carries the recovered layout. */
int bvw_solve(const uint32_t* counts, int k, int grid_w, int grid_h, int patch_size,
              int stride, const bvw_adjacency* adjacency, const bvw_position* position,
              const char* solver, double lambda, uint64_t seed, int population,
              double replace_prob, int max_generations, bvw_grid** layout_out,
              double* objective_out);
int bvw_objective(const bvw_grid* layout, const bvw_adjacency* adjacency,
                  const bvw_position* position, double lambda, double* out);

/* ---- rendering and metrics ---- */
int bvw_render(const bvw_grid* layout, const bvw_codebook* cb, bvw_image** out);
int bvw_xcorr(const bvw_image* a, const bvw_image* b, double* out);
int bvw_xcorr_shift(const bvw_image* a, const bvw_image* b, int max_shift, double* out);
int bvw_direct_comparison(const bvw_grid* layout, const bvw_grid* truth, double* out);
int bvw_neighbor_comparison(const bvw_grid* layout, const bvw_grid* truth, double* out);

/* ---- histogram and classifier files ---- */
int bvw_histogram_save(const char* path, const uint32_t* counts, int k);
/* *counts_out is bvw_free()d by the caller */
int bvw_histogram_load(const char* path, uint32_t** counts_out, int* k_out);
int bvw_classifier_load(const char* path, double** weights_out, int* k_out, double* bias_out);

/* ---- applications ---- */
/* *steps_out histograms of k counts each, concatenated; bvw_free()d by the
 * caller. */
int bvw_morph(const uint32_t* ws, const uint32_t* wt, int k, uint64_t seed,
              uint32_t** sequence_out, int* steps_out);
int bvw_classifier_to_bovw(const double* weights, int k, int n, uint32_t* counts_out);
int bvw_corpus_load(const char* path, bvw_corpus** out);
int bvw_corpus_k(const bvw_corpus* corpus);
int bvw_corpus_has_word(const bvw_corpus* corpus, const char* word);
/* direction_out must hold k entries */
int bvw_word_direction(const bvw_corpus* corpus, const char* word, double* direction_out);
int bvw_sentence_to_bovw(const bvw_corpus* corpus, const char* const* words, int word_count,
                         int n, uint32_t* counts_out);
void bvw_corpus_free(bvw_corpus* corpus);

#ifdef __cplusplus
}
#endif

#endif /* BOVWREC_H */
