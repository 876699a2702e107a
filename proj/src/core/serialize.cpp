#include "serialize.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bovw {

namespace {

static_assert(std::endian::native == std::endian::little,
              "byte-swapping for big-endian hosts is not implemented");

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
  std::uint32_t v;
  if (!in.read(reinterpret_cast<char*>(&v), 4)) throw IoError("truncated file: " + path);
  return v;
}

template <typename T>
void write_array(std::ostream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void read_array(std::istream& in, T* data, std::size_t count, const std::string& path) {
  if (!in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T))))
    throw IoError("truncated file: " + path);
}

void expect_magic(std::istream& in, const char* magic, const std::string& path) {
  char buf[4];
  if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0)
    throw IoError("bad magic, expected " + std::string(magic) + ": " + path);
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void save_codebook(const Codebook& cb, const std::string& path) {
  auto out = open_out(path);
  out.write("BVWC", 4);
  write_u32(out, static_cast<std::uint32_t>(cb.k));
  write_u32(out, static_cast<std::uint32_t>(kDescriptorDim));
  write_u32(out, static_cast<std::uint32_t>(cb.patch_size));
  write_array(out, cb.centroids.data(), cb.centroids.size());
  for (const auto& patch : cb.mean_patches) write_array(out, patch.data(), patch.size());
  write_array(out, cb.train_counts.data(), cb.train_counts.size());
  finish(out, path);
}

Codebook load_codebook(const std::string& path) {
  auto in = open_in(path);
  expect_magic(in, "BVWC", path);
  Codebook cb;
  cb.k = static_cast<int>(read_u32(in, path));
  std::uint32_t dim = read_u32(in, path);
  cb.patch_size = static_cast<int>(read_u32(in, path));
  if (cb.k < 1 || dim != kDescriptorDim || cb.patch_size < 1)
    throw IoError("invalid codebook header: " + path);
  cb.centroids.resize(static_cast<std::size_t>(cb.k) * kDescriptorDim);
  read_array(in, cb.centroids.data(), cb.centroids.size(), path);
  std::size_t patch_len = static_cast<std::size_t>(cb.patch_size) * cb.patch_size;
  cb.mean_patches.assign(cb.k, std::vector<float>(patch_len));
  for (auto& patch : cb.mean_patches) read_array(in, patch.data(), patch_len, path);
  cb.train_counts.resize(cb.k);
  read_array(in, cb.train_counts.data(), cb.train_counts.size(), path);
  return cb;
}

void save_adjacency_cost(const AdjacencyCost& cost, const std::string& path) {
  auto out = open_out(path);
  out.write("BVWA", 4);
  write_u32(out, static_cast<std::uint32_t>(cost.k));
  write_u32(out, static_cast<std::uint32_t>(cost.offsets.size()));
  for (int d = 0; d < cost.offsets.size(); ++d) {
    auto [dx, dy] = cost.offsets.offset(d);
    char pair[2] = {static_cast<char>(dx), static_cast<char>(dy)};
    out.write(pair, 2);
  }
  write_array(out, cost.table.data(), cost.table.size());
  finish(out, path);
}

AdjacencyCost load_adjacency_cost(const std::string& path) {
  auto in = open_in(path);
  expect_magic(in, "BVWA", path);
  AdjacencyCost cost;
  cost.k = static_cast<int>(read_u32(in, path));
  int m = static_cast<int>(read_u32(in, path));
  if (cost.k < 1 || m < 1) throw IoError("invalid adjacency header: " + path);
  std::vector<std::pair<int, int>> offsets(m);
  for (auto& [dx, dy] : offsets) {
    char pair[2];
    if (!in.read(pair, 2)) throw IoError("truncated file: " + path);
    dx = static_cast<signed char>(pair[0]);
    dy = static_cast<signed char>(pair[1]);
  }
  cost.offsets = OffsetSet::from_list(std::move(offsets));
  cost.table.resize(static_cast<std::size_t>(cost.k) * cost.k * m);
  read_array(in, cost.table.data(), cost.table.size(), path);
  return cost;
}

void save_position_cost(const PositionCost& cost, const std::string& path) {
  auto out = open_out(path);
  out.write("BVWP", 4);
  write_u32(out, static_cast<std::uint32_t>(cost.k));
  write_u32(out, static_cast<std::uint32_t>(cost.n));
  write_array(out, cost.table.data(), cost.table.size());
  finish(out, path);
}

PositionCost load_position_cost(const std::string& path) {
  auto in = open_in(path);
  expect_magic(in, "BVWP", path);
  PositionCost cost;
  cost.k = static_cast<int>(read_u32(in, path));
  cost.n = static_cast<int>(read_u32(in, path));
  if (cost.k < 1 || cost.n < 1) throw IoError("invalid position header: " + path);
  cost.table.resize(static_cast<std::size_t>(cost.k) * cost.n);
  read_array(in, cost.table.data(), cost.table.size(), path);
  return cost;
}

void save_histogram(const BovwHistogram& hist, const std::string& path) {
  auto out = open_out(path);
  out << hist.counts.size() << "\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    out << (i ? " " : "") << hist.counts[i];
  out << "\n";
  finish(out, path);
}

BovwHistogram load_histogram(const std::string& path) {
  auto in = open_in(path);
  long long k;
  if (!(in >> k) || k < 1) throw IoError("invalid histogram header: " + path);
  BovwHistogram hist;
  hist.counts.resize(static_cast<std::size_t>(k));
  for (auto& c : hist.counts) {
    long long v;
    if (!(in >> v) || v < 0) throw IoError("invalid histogram count: " + path);
    c = static_cast<std::uint32_t>(v);
  }
  return hist;
}

LinearClassifier load_classifier(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty classifier file: " + path);
  LinearClassifier clf;
  std::istringstream ws(line);
  double v;
  while (ws >> v) clf.weights.push_back(v);
  if (clf.weights.empty()) throw IoError("no weights in classifier file: " + path);
  if (std::getline(in, line)) {
    std::istringstream bs(line);
    bs >> clf.bias;
  }
  return clf;
}

CaptionCorpus load_caption_corpus(const std::string& path) {
  auto in = open_in(path);
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  CaptionCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw IoError("caption corpus line missing tab separator: " + path);
    std::filesystem::path hist_path(line.substr(0, tab));
    if (hist_path.is_relative()) hist_path = base / hist_path;
    CaptionEntry entry;
    entry.hist = load_histogram(hist_path.string());
    std::istringstream tokens(line.substr(tab + 1));
    std::string token;
    while (tokens >> token) ++entry.words[token];
    corpus.entries.push_back(std::move(entry));
  }
  if (corpus.entries.empty()) throw IoError("empty caption corpus: " + path);
  return corpus;
}

}  // namespace bovw
