// Command-line front end. Talks to the library exclusively through the C API
// in bovwrec.h; every command writes a JSON manifest next to its outputs so
// runs can be reproduced bit-identically.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bovwrec.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) {
  throw CliError{code, message};
}

// Maps a C API status to an exit code and aborts with the library's message.
void check(int rc) {
  if (rc == BVW_OK) return;
  die(rc == BVW_ERR_IO ? kExitIo : kExitInvalid, bvw_last_error());
}

template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, std::integral_constant<decltype(Free), Free>>;

using ImagePtr = Handle<bvw_image, bvw_image_free>;
using CodebookPtr = Handle<bvw_codebook, bvw_codebook_free>;
using GridPtr = Handle<bvw_grid, bvw_grid_free>;
using AdjacencyPtr = Handle<bvw_adjacency, bvw_adjacency_free>;
using PositionPtr = Handle<bvw_position, bvw_position_free>;
using CorpusPtr = Handle<bvw_corpus, bvw_corpus_free>;

ImagePtr load_image(const std::string& path) {
  bvw_image* img = nullptr;
  check(bvw_image_load(path.c_str(), &img));
  return ImagePtr(img);
}

CodebookPtr load_codebook(const std::string& path) {
  bvw_codebook* cb = nullptr;
  check(bvw_codebook_load(path.c_str(), &cb));
  return CodebookPtr(cb);
}

std::vector<std::string> list_images(const std::string& dir) {
  std::vector<std::string> paths;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm") paths.push_back(entry.path().string());
  }
  if (ec) die(kExitIo, "cannot read directory: " + dir);
  std::sort(paths.begin(), paths.end());
  return paths;
}

// True when the file starts with a PGM/PPM magic, i.e. it is an image rather
// than a text histogram.
bool is_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitIo, "cannot open: " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  return magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6');
}

int square_offset_count(int radius) { return (2 * radius + 1) * (2 * radius + 1) - 1; }

int radius_for_m(int m) {
  for (int r = 1; r <= 8; ++r)
    if (square_offset_count(r) == m) return r;
  die(kExitInvalid, "m must be (2r+1)^2-1 for some radius r >= 1 (8, 24, 48, ...)");
}

// Extracts the word grids of all images, optionally across threads. Results
// are ordered by input index, so the outcome is independent of thread count.
std::vector<GridPtr> extract_all(const std::vector<std::string>& paths,
                                 const bvw_codebook* cb, int stride, int threads) {
  std::vector<GridPtr> grids(paths.size());
  std::vector<int> status(paths.size(), BVW_OK);
  auto worker = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < paths.size(); i += step) {
      bvw_image* img = nullptr;
      status[i] = bvw_image_load(paths[i].c_str(), &img);
      if (status[i] != BVW_OK) continue;
      bvw_grid* grid = nullptr;
      status[i] = bvw_extract_grid(img, cb, stride, &grid);
      bvw_image_free(img);
      if (status[i] == BVW_OK) grids[i].reset(grid);
    }
  };
  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (status[i] != BVW_OK)
      die(status[i] == BVW_ERR_IO ? kExitIo : kExitInvalid,
          paths[i] + ": " + bvw_last_error());
  return grids;
}

void write_manifest(const std::string& out_path, const json& manifest) {
  std::string path = out_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) die(kExitIo, "cannot write manifest: " + path);
  out << manifest.dump(2) << "\n";
  if (!out.flush()) die(kExitIo, "cannot write manifest: " + path);
}

json base_manifest(const std::string& command, const std::vector<std::string>& argv) {
  json m;
  m["tool"] = "bovwrec-cli";
  m["version"] = bvw_version();
  m["command"] = command;
  m["argv"] = argv;
  return m;
}

struct SolverOptions {
  std::string solver = "gahc";
  double lambda = 0.8;
  std::uint64_t seed = 0;
  int population = 100;
  double replace_prob = 0.2;
  int max_generations = 2000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--solver", solver, "rand | hc | sa | gahc | brute")
        ->check(CLI::IsMember({"rand", "hc", "sa", "gahc", "brute"}));
    cmd->add_option("--lambda", lambda, "position-cost weight in [0,1]");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--population", population, "GA population size");
    cmd->add_option("--replace-prob", replace_prob, "GA similar-pair replacement probability");
    cmd->add_option("--max-generations", max_generations, "GA generation cap");
  }

  json to_json() const {
    return {{"solver", solver},           {"lambda", lambda},
            {"seed", seed},               {"population", population},
            {"replace_prob", replace_prob}, {"max_generations", max_generations}};
  }
};

GridPtr solve(const std::vector<std::uint32_t>& counts, int grid_w, int grid_h,
              int patch_size, int stride, const bvw_adjacency* adjacency,
              const bvw_position* position, const SolverOptions& opt, double* objective) {
  bvw_grid* layout = nullptr;
  check(bvw_solve(counts.data(), static_cast<int>(counts.size()), grid_w, grid_h,
                  patch_size, stride, adjacency, position, opt.solver.c_str(), opt.lambda,
                  opt.seed, opt.population, opt.replace_prob, opt.max_generations, &layout,
                  objective));
  return GridPtr(layout);
}

void infer_square_grid(std::uint64_t total, int* grid_w, int* grid_h) {
  auto side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(total))));
  if (static_cast<std::uint64_t>(side) * side != total)
    die(kExitInvalid, "histogram total is not a perfect square; cannot infer grid shape");
  *grid_w = side;
  *grid_h = side;
}

std::string csv_field(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_csv_row(const std::string& path, const std::string& image_id,
                   const std::string& xc, const std::string& xc4, const std::string& xc8,
                   const std::string& dc, const std::string& nc, double objective,
                   double wall_time_s) {
  std::ofstream out(path);
  if (!out) die(kExitIo, "cannot write csv: " + path);
  out << "image_id,xcorr,xcorr4,xcorr8,dc,nc,objective,wall_time_s\n";
  out << image_id << "," << xc << "," << xc4 << "," << xc8 << "," << dc << "," << nc << ","
      << csv_field(objective) << "," << csv_field(wall_time_s) << "\n";
  if (!out.flush()) die(kExitIo, "cannot write csv: " + path);
}

std::vector<std::uint32_t> load_hist_file(const std::string& path) {
  std::uint32_t* counts = nullptr;
  int k = 0;
  check(bvw_histogram_load(path.c_str(), &counts, &k));
  std::vector<std::uint32_t> out(counts, counts + k);
  bvw_free(counts);
  return out;
}

std::string run_dir_name(const std::string& prefix, int index, const char* suffix) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%03d%s", index, suffix);
  return prefix + buf;
}

}  // namespace

int run(int argc, char** argv, CLI::App& app) {
  using Clock = std::chrono::steady_clock;
  std::vector<std::string> argv_vec(argv, argv + argc);

  // ---- build-codebook ----
  auto* build = app.add_subcommand("build-codebook", "train a codebook from an image directory");
  struct {
    std::string images, out;
    int k = 256, iters = 50, patch_size = 32, stride = 8, threads = 1;
    std::uint64_t seed = 0;
  } bc;
  build->add_option("--images", bc.images, "directory of .pgm/.ppm files")->required();
  build->add_option("--k", bc.k, "vocabulary size (paper uses 8192; desk-scale default 256)");
  build->add_option("--iters", bc.iters, "k-means iteration cap");
  build->add_option("--seed", bc.seed, "random seed");
  build->add_option("--patch-size", bc.patch_size, "patch side in pixels");
  build->add_option("--stride", bc.stride, "sampling stride in pixels");
  build->add_option("--threads", bc.threads, "corpus processing threads");
  build->add_option("--out", bc.out, "output codebook file")->required();
  build->callback([&] {
    auto t0 = Clock::now();
    auto paths = list_images(bc.images);
    if (paths.empty()) die(kExitInvalid, "no images in directory: " + bc.images);
    std::vector<ImagePtr> images;
    std::vector<const bvw_image*> raw;
    for (const auto& p : paths) {
      images.push_back(load_image(p));
      raw.push_back(images.back().get());
    }
    bvw_codebook* cb = nullptr;
    check(bvw_codebook_train(raw.data(), static_cast<int>(raw.size()), bc.k, bc.iters,
                             bc.seed, bc.patch_size, bc.stride, &cb));
    CodebookPtr codebook(cb);
    check(bvw_codebook_save(codebook.get(), bc.out.c_str()));
    json m = base_manifest("build-codebook", argv_vec);
    m["params"] = {{"images", bc.images}, {"k", bc.k},         {"iters", bc.iters},
                   {"seed", bc.seed},     {"patch_size", bc.patch_size},
                   {"stride", bc.stride}, {"threads", bc.threads}};
    m["inputs"] = paths;
    m["outputs"] = {bc.out};
    m["wall_time_s"] = std::chrono::duration<double>(Clock::now() - t0).count();
    write_manifest(bc.out, m);
  });

  // ---- learn-costs ----
  auto* learn = app.add_subcommand("learn-costs", "learn adjacency and position cost tables");
  struct {
    std::string images, codebook, out_prefix;
    int m = 48, stride = 8, threads = 1, grid_w = 0, grid_h = 0;
    bool allow_empty = false;
  } lc;
  learn->add_option("--images", lc.images, "directory of corpus images");
  learn->add_option("--codebook", lc.codebook, "codebook file")->required();
  learn->add_option("--m", lc.m, "offset count, (2r+1)^2-1 (8, 24, 48, ...)");
  learn->add_option("--stride", lc.stride, "sampling stride in pixels");
  learn->add_option("--threads", lc.threads, "corpus processing threads");
  learn->add_flag("--allow-empty", lc.allow_empty, "permit an empty corpus (uniform tables)");
  learn->add_option("--grid-w", lc.grid_w, "place-grid width (required when corpus is empty)");
  learn->add_option("--grid-h", lc.grid_h, "place-grid height (required when corpus is empty)");
  learn->add_option("--out-prefix", lc.out_prefix, "writes PREFIX.adj and PREFIX.pos")
      ->required();
  learn->callback([&] {
    auto t0 = Clock::now();
    auto codebook = load_codebook(lc.codebook);
    std::vector<std::string> paths;
    if (!lc.images.empty()) paths = list_images(lc.images);
    if (paths.empty() && !lc.allow_empty)
      die(kExitInvalid, "no corpus images (use --allow-empty for uniform tables)");
    if (paths.empty() && (lc.grid_w < 1 || lc.grid_h < 1))
      die(kExitInvalid, "--grid-w/--grid-h required with an empty corpus");
    auto grids = extract_all(paths, codebook.get(), lc.stride, lc.threads);
    std::vector<const bvw_grid*> raw;
    for (const auto& g : grids) raw.push_back(g.get());
    int radius = radius_for_m(lc.m);
    bvw_adjacency* adjacency = nullptr;
    bvw_position* position = nullptr;
    check(bvw_learn_costs(raw.data(), static_cast<int>(raw.size()),
                          bvw_codebook_k(codebook.get()), radius, lc.grid_w, lc.grid_h,
                          bvw_codebook_patch_size(codebook.get()), lc.stride, &adjacency,
                          &position));
    AdjacencyPtr adj(adjacency);
    PositionPtr pos(position);
    std::string adj_path = lc.out_prefix + ".adj";
    std::string pos_path = lc.out_prefix + ".pos";
    check(bvw_adjacency_save(adj.get(), adj_path.c_str()));
    check(bvw_position_save(pos.get(), pos_path.c_str()));
    json m = base_manifest("learn-costs", argv_vec);
    m["params"] = {{"images", lc.images}, {"codebook", lc.codebook}, {"m", lc.m},
                   {"stride", lc.stride}, {"threads", lc.threads},
                   {"grid_w", lc.grid_w}, {"grid_h", lc.grid_h}};
    m["inputs"] = paths;
    m["outputs"] = {adj_path, pos_path};
    m["wall_time_s"] = std::chrono::duration<double>(Clock::now() - t0).count();
    write_manifest(lc.out_prefix, m);
  });

  // ---- extract ----
  auto* extract = app.add_subcommand("extract", "extract the BoVW histogram of one image");
  struct {
    std::string image, codebook, out;
    int stride = 8;
  } ex;
  extract->add_option("--image", ex.image, "input image")->required();
  extract->add_option("--codebook", ex.codebook, "codebook file")->required();
  extract->add_option("--stride", ex.stride, "sampling stride in pixels");
  extract->add_option("--out", ex.out, "output histogram text file")->required();
  extract->callback([&] {
    auto t0 = Clock::now();
    auto codebook = load_codebook(ex.codebook);
    auto image = load_image(ex.image);
    bvw_grid* grid = nullptr;
    check(bvw_extract_grid(image.get(), codebook.get(), ex.stride, &grid));
    GridPtr g(grid);
    int k = bvw_codebook_k(codebook.get());
    std::vector<std::uint32_t> counts(k);
    check(bvw_grid_pool(g.get(), k, counts.data()));
    check(bvw_histogram_save(ex.out.c_str(), counts.data(), k));
    json m = base_manifest("extract", argv_vec);
    m["params"] = {{"image", ex.image}, {"codebook", ex.codebook}, {"stride", ex.stride}};
    m["outputs"] = {ex.out};
    m["wall_time_s"] = std::chrono::duration<double>(Clock::now() - t0).count();
    write_manifest(ex.out, m);
  });

  // ---- reconstruct ----
  auto* rec = app.add_subcommand("reconstruct", "reconstruct an image from a BoVW");
  struct {
    std::string input, codebook, adjacency, position, out, csv;
    int stride = 8;
    SolverOptions opt;
  } rc;
  rec->add_option("--input", rc.input, "image (.pgm/.ppm) or histogram text file")->required();
  rec->add_option("--codebook", rc.codebook, "codebook file")->required();
  rec->add_option("--adjacency", rc.adjacency, "adjacency cost file")->required();
  rec->add_option("--position", rc.position, "position cost file")->required();
  rec->add_option("--stride", rc.stride, "sampling stride in pixels");
  rc.opt.attach(rec);
  rec->add_option("--out", rc.out, "output image")->required();
  rec->add_option("--csv", rc.csv, "metric report CSV path");
  rec->callback([&] {
    auto t0 = Clock::now();
    auto codebook = load_codebook(rc.codebook);
    bvw_adjacency* adjacency = nullptr;
    check(bvw_adjacency_load(rc.adjacency.c_str(), &adjacency));
    AdjacencyPtr adj(adjacency);
    bvw_position* position = nullptr;
    check(bvw_position_load(rc.position.c_str(), &position));
    PositionPtr pos(position);
    int k = bvw_codebook_k(codebook.get());
    int patch_size = bvw_codebook_patch_size(codebook.get());

    std::vector<std::uint32_t> counts;
    GridPtr truth_grid;
    ImagePtr truth_image;
    int grid_w = 0, grid_h = 0;
    if (is_pnm(rc.input)) {
      truth_image = load_image(rc.input);
      bvw_grid* grid = nullptr;
      check(bvw_extract_grid(truth_image.get(), codebook.get(), rc.stride, &grid));
      truth_grid.reset(grid);
      grid_w = bvw_grid_width(grid);
      grid_h = bvw_grid_height(grid);
      counts.resize(k);
      check(bvw_grid_pool(grid, k, counts.data()));
    } else {
      counts = load_hist_file(rc.input);
      if (static_cast<int>(counts.size()) != k)
        die(kExitInvalid, "histogram K does not match codebook K");
      std::uint64_t total = 0;
      for (auto c : counts) total += c;
      infer_square_grid(total, &grid_w, &grid_h);
    }

    double objective = 0.0;
    GridPtr layout = solve(counts, grid_w, grid_h, patch_size, rc.stride, adj.get(),
                           pos.get(), rc.opt, &objective);
    bvw_image* rendered = nullptr;
    check(bvw_render(layout.get(), codebook.get(), &rendered));
    ImagePtr out_image(rendered);
    check(bvw_image_save_pgm(out_image.get(), rc.out.c_str()));

    double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    json m = base_manifest("reconstruct", argv_vec);
    m["params"] = rc.opt.to_json();
    m["params"]["input"] = rc.input;
    m["params"]["codebook"] = rc.codebook;
    m["params"]["adjacency"] = rc.adjacency;
    m["params"]["position"] = rc.position;
    m["params"]["stride"] = rc.stride;
    m["objective"] = objective;
    m["outputs"] = json::array({rc.out});

    if (!rc.csv.empty()) {
      std::string xc = "", xc4 = "", xc8 = "", dc = "", nc = "";
      if (truth_image) {
        double v;
        check(bvw_xcorr(out_image.get(), truth_image.get(), &v));
        xc = csv_field(v);
        check(bvw_xcorr_shift(out_image.get(), truth_image.get(), 4, &v));
        xc4 = csv_field(v);
        check(bvw_xcorr_shift(out_image.get(), truth_image.get(), 8, &v));
        xc8 = csv_field(v);
        check(bvw_direct_comparison(layout.get(), truth_grid.get(), &v));
        dc = csv_field(v);
        check(bvw_neighbor_comparison(layout.get(), truth_grid.get(), &v));
        nc = csv_field(v);
      }
      write_csv_row(rc.csv, fs::path(rc.input).stem().string(), xc, xc4, xc8, dc, nc,
                    objective, wall);
      m["outputs"].push_back(rc.csv);
    }
    m["wall_time_s"] = wall;
    write_manifest(rc.out, m);
  });

  // ---- evaluate ----
  auto* eval = app.add_subcommand("evaluate", "compare a reconstruction against a reference");
  struct {
    std::string image, truth, codebook, csv;
    int stride = 8;
  } ev;
  eval->add_option("--image", ev.image, "reconstruction image")->required();
  eval->add_option("--truth", ev.truth, "reference image")->required();
  eval->add_option("--codebook", ev.codebook, "codebook (enables DC/NC via quantization)");
  eval->add_option("--stride", ev.stride, "sampling stride in pixels");
  eval->add_option("--csv", ev.csv, "output CSV path")->required();
  eval->callback([&] {
    auto t0 = Clock::now();
    auto image = load_image(ev.image);
    auto truth = load_image(ev.truth);
    double xc, xc4, xc8;
    check(bvw_xcorr(image.get(), truth.get(), &xc));
    check(bvw_xcorr_shift(image.get(), truth.get(), 4, &xc4));
    check(bvw_xcorr_shift(image.get(), truth.get(), 8, &xc8));
    std::string dc = "", nc = "";
    if (!ev.codebook.empty()) {
      auto codebook = load_codebook(ev.codebook);
      bvw_grid *ga = nullptr, *gb = nullptr;
      check(bvw_extract_grid(image.get(), codebook.get(), ev.stride, &ga));
      GridPtr a(ga);
      check(bvw_extract_grid(truth.get(), codebook.get(), ev.stride, &gb));
      GridPtr b(gb);
      double v;
      check(bvw_direct_comparison(a.get(), b.get(), &v));
      dc = csv_field(v);
      check(bvw_neighbor_comparison(a.get(), b.get(), &v));
      nc = csv_field(v);
    }
    double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    write_csv_row(ev.csv, fs::path(ev.image).stem().string(), csv_field(xc), csv_field(xc4),
                  csv_field(xc8), dc, nc, 0.0, wall);
    json m = base_manifest("evaluate", argv_vec);
    m["params"] = {{"image", ev.image}, {"truth", ev.truth},
                   {"codebook", ev.codebook}, {"stride", ev.stride}};
    m["outputs"] = {ev.csv};
    m["wall_time_s"] = wall;
    write_manifest(ev.csv, m);
  });

  // ---- morph ----
  auto* morph = app.add_subcommand("morph", "morph between two BoVW histograms");
  struct {
    std::string from, to, codebook, adjacency, position, out_prefix;
    int stride = 8;
    SolverOptions opt;
  } mo;
  morph->add_option("--from", mo.from, "source histogram text file")->required();
  morph->add_option("--to", mo.to, "target histogram text file")->required();
  morph->add_option("--codebook", mo.codebook, "codebook file")->required();
  morph->add_option("--adjacency", mo.adjacency, "adjacency cost file")->required();
  morph->add_option("--position", mo.position, "position cost file")->required();
  morph->add_option("--stride", mo.stride, "sampling stride in pixels");
  mo.opt.attach(morph);
  morph->add_option("--out-prefix", mo.out_prefix, "writes PREFIX_###.pgm / PREFIX_###.txt")
      ->required();
  morph->callback([&] {
    auto t0 = Clock::now();
    auto codebook = load_codebook(mo.codebook);
    bvw_adjacency* adjacency = nullptr;
    check(bvw_adjacency_load(mo.adjacency.c_str(), &adjacency));
    AdjacencyPtr adj(adjacency);
    bvw_position* position = nullptr;
    check(bvw_position_load(mo.position.c_str(), &position));
    PositionPtr pos(position);
    auto ws = load_hist_file(mo.from);
    auto wt = load_hist_file(mo.to);
    int k = bvw_codebook_k(codebook.get());
    if (static_cast<int>(ws.size()) != k || static_cast<int>(wt.size()) != k)
      die(kExitInvalid, "histogram K does not match codebook K");
    std::uint32_t* sequence = nullptr;
    int steps = 0;
    check(bvw_morph(ws.data(), wt.data(), k, mo.opt.seed, &sequence, &steps));
    std::unique_ptr<std::uint32_t, decltype(&bvw_free)> seq_guard(sequence, bvw_free);
    std::uint64_t total = 0;
    for (auto c : ws) total += c;
    int grid_w = 0, grid_h = 0;
    infer_square_grid(total, &grid_w, &grid_h);

    json outputs = json::array();
    for (int i = 0; i < steps; ++i) {
      std::vector<std::uint32_t> counts(sequence + i * k, sequence + (i + 1) * k);
      std::string hist_path = run_dir_name(mo.out_prefix, i, ".txt");
      check(bvw_histogram_save(hist_path.c_str(), counts.data(), k));
      SolverOptions step_opt = mo.opt;
      step_opt.seed = mo.opt.seed + static_cast<std::uint64_t>(i);
      double objective = 0.0;
      GridPtr layout = solve(counts, grid_w, grid_h, bvw_codebook_patch_size(codebook.get()),
                             mo.stride, adj.get(), pos.get(), step_opt, &objective);
      bvw_image* rendered = nullptr;
      check(bvw_render(layout.get(), codebook.get(), &rendered));
      ImagePtr img(rendered);
      std::string img_path = run_dir_name(mo.out_prefix, i, ".pgm");
      check(bvw_image_save_pgm(img.get(), img_path.c_str()));
      outputs.push_back(hist_path);
      outputs.push_back(img_path);
    }
    json m = base_manifest("morph", argv_vec);
    m["params"] = mo.opt.to_json();
    m["params"]["from"] = mo.from;
    m["params"]["to"] = mo.to;
    m["params"]["codebook"] = mo.codebook;
    m["params"]["adjacency"] = mo.adjacency;
    m["params"]["position"] = mo.position;
    m["params"]["stride"] = mo.stride;
    m["steps"] = steps;
    m["outputs"] = outputs;
    m["wall_time_s"] = std::chrono::duration<double>(Clock::now() - t0).count();
    write_manifest(mo.out_prefix, m);
  });

  // ---- invert-classifier ----
  auto* invert = app.add_subcommand("invert-classifier",
                                    "reconstruct the image a linear classifier responds to");
  struct {
    std::string weights, codebook, adjacency, position, out_prefix;
    int n = 169, runs = 1, stride = 8;
    SolverOptions opt;
  } iv;
  invert->add_option("--weights", iv.weights, "text file of K weights")->required();
  invert->add_option("--n", iv.n, "target word-instance count (grid cell count)");
  invert->add_option("--runs", iv.runs, "number of candidate reconstructions to emit");
  invert->add_option("--stride", iv.stride, "sampling stride in pixels");
  invert->add_option("--codebook", iv.codebook, "codebook file")->required();
  invert->add_option("--adjacency", iv.adjacency, "adjacency cost file")->required();
  invert->add_option("--position", iv.position, "position cost file")->required();
  iv.opt.attach(invert);
  invert->add_option("--out-prefix", iv.out_prefix, "writes PREFIX_run###.pgm")->required();
  invert->callback([&] {
    auto t0 = Clock::now();
    auto codebook = load_codebook(iv.codebook);
    bvw_adjacency* adjacency = nullptr;
    check(bvw_adjacency_load(iv.adjacency.c_str(), &adjacency));
    AdjacencyPtr adj(adjacency);
    bvw_position* position = nullptr;
    check(bvw_position_load(iv.position.c_str(), &position));
    PositionPtr pos(position);
    double* weights = nullptr;
    int k = 0;
    double bias = 0.0;
    check(bvw_classifier_load(iv.weights.c_str(), &weights, &k, &bias));
    std::unique_ptr<double, decltype(&bvw_free)> weights_guard(weights, bvw_free);
    if (k != bvw_codebook_k(codebook.get()))
      die(kExitInvalid, "classifier K does not match codebook K");
    std::vector<std::uint32_t> counts(k);
    check(bvw_classifier_to_bovw(weights, k, iv.n, counts.data()));
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    int grid_w = 0, grid_h = 0;
    infer_square_grid(total, &grid_w, &grid_h);

    json outputs = json::array();
    for (int r = 0; r < iv.runs; ++r) {
      SolverOptions run_opt = iv.opt;
      run_opt.seed = iv.opt.seed + static_cast<std::uint64_t>(r);
      double objective = 0.0;
      GridPtr layout = solve(counts, grid_w, grid_h, bvw_codebook_patch_size(codebook.get()),
                             iv.stride, adj.get(), pos.get(), run_opt, &objective);
      bvw_image* rendered = nullptr;
      check(bvw_render(layout.get(), codebook.get(), &rendered));
      ImagePtr img(rendered);
      std::string img_path = run_dir_name(iv.out_prefix, r, ".pgm");
      check(bvw_image_save_pgm(img.get(), img_path.c_str()));
      outputs.push_back(img_path);
    }
    json m = base_manifest("invert-classifier", argv_vec);
    m["params"] = iv.opt.to_json();
    m["params"]["weights"] = iv.weights;
    m["params"]["n"] = iv.n;
    m["params"]["runs"] = iv.runs;
    m["params"]["codebook"] = iv.codebook;
    m["params"]["adjacency"] = iv.adjacency;
    m["params"]["position"] = iv.position;
    m["params"]["stride"] = iv.stride;
    m["histogram"] = counts;  // the intermediate BoVW the images reconstruct
    m["outputs"] = outputs;
    m["wall_time_s"] = std::chrono::duration<double>(Clock::now() - t0).count();
    write_manifest(iv.out_prefix, m);
  });

  // ---- sentence ----
  auto* sentence = app.add_subcommand("sentence", "reconstruct an image from caption words");
  struct {
    std::string corpus, codebook, adjacency, position, out;
    std::vector<std::string> words;
    int n = 169, stride = 8;
    SolverOptions opt;
  } se;
  sentence->add_option("--corpus", se.corpus, "caption corpus file")->required();
  sentence->add_option("--words", se.words, "sentence words")->required()->expected(-1);
  sentence->add_option("--n", se.n, "target word-instance count (grid cell count)");
  sentence->add_option("--stride", se.stride, "sampling stride in pixels");
  sentence->add_option("--codebook", se.codebook, "codebook file")->required();
  sentence->add_option("--adjacency", se.adjacency, "adjacency cost file")->required();
  sentence->add_option("--position", se.position, "position cost file")->required();
  se.opt.attach(sentence);
  sentence->add_option("--out", se.out, "output image")->required();
  sentence->callback([&] {
    auto t0 = Clock::now();
    auto codebook = load_codebook(se.codebook);
    bvw_adjacency* adjacency = nullptr;
    check(bvw_adjacency_load(se.adjacency.c_str(), &adjacency));
    AdjacencyPtr adj(adjacency);
    bvw_position* position = nullptr;
    check(bvw_position_load(se.position.c_str(), &position));
    PositionPtr pos(position);
    bvw_corpus* corpus_raw = nullptr;
    check(bvw_corpus_load(se.corpus.c_str(), &corpus_raw));
    CorpusPtr corpus(corpus_raw);
    int k = bvw_corpus_k(corpus.get());
    if (k != bvw_codebook_k(codebook.get()))
      die(kExitInvalid, "corpus K does not match codebook K");
    for (const auto& w : se.words)
      if (!bvw_corpus_has_word(corpus.get(), w.c_str()))
        std::cerr << "warning: word not in corpus, skipping: " << w << "\n";
    std::vector<const char*> words;
    for (const auto& w : se.words) words.push_back(w.c_str());
    std::vector<std::uint32_t> counts(k);
    check(bvw_sentence_to_bovw(corpus.get(), words.data(), static_cast<int>(words.size()),
                               se.n, counts.data()));
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    int grid_w = 0, grid_h = 0;
    infer_square_grid(total, &grid_w, &grid_h);
    double objective = 0.0;
    GridPtr layout = solve(counts, grid_w, grid_h, bvw_codebook_patch_size(codebook.get()),
                           se.stride, adj.get(), pos.get(), se.opt, &objective);
    bvw_image* rendered = nullptr;
    check(bvw_render(layout.get(), codebook.get(), &rendered));
    ImagePtr img(rendered);
    check(bvw_image_save_pgm(img.get(), se.out.c_str()));
    json m = base_manifest("sentence", argv_vec);
    m["params"] = se.opt.to_json();
    m["params"]["corpus"] = se.corpus;
    m["params"]["words"] = se.words;
    m["params"]["n"] = se.n;
    m["params"]["codebook"] = se.codebook;
    m["params"]["adjacency"] = se.adjacency;
    m["params"]["position"] = se.position;
    m["params"]["stride"] = se.stride;
    m["histogram"] = counts;
    m["outputs"] = {se.out};
    m["wall_time_s"] = std::chrono::duration<double>(Clock::now() - t0).count();
    write_manifest(se.out, m);
  });

  app.require_subcommand(1);
  app.parse(argc, argv);  // option structs must stay alive through the callbacks
  return 0;
}

int main(int argc, char** argv) {
  CLI::App app{"image reconstruction from bag-of-visual-words histograms"};
  try {
    return run(argc, argv, app);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  }
}
