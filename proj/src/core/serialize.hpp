#pragma once

#include <string>

#include "apps.hpp"
#include "costs.hpp"

namespace bovw {

// Binary, little-endian. Codebook: magic "BVWC", K/D/patch_size u32, then
// centroids, mean patches, train counts. Costs: magic "BVWA"/"BVWP", header
// K and m (or N) u32, offset list as signed byte pairs (adjacency only),
// table floats in index order.
void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);

void save_adjacency_cost(const AdjacencyCost& cost, const std::string& path);
AdjacencyCost load_adjacency_cost(const std::string& path);

void save_position_cost(const PositionCost& cost, const std::string& path);
PositionCost load_position_cost(const std::string& path);

// Plain text: first line K, second line K space-separated counts.
void save_histogram(const BovwHistogram& hist, const std::string& path);
BovwHistogram load_histogram(const std::string& path);

// Plain text: K space-separated weights, optional second line with the bias.
LinearClassifier load_classifier(const std::string& path);

// One record per line: histogram file path, tab, space-separated caption
// tokens. Relative histogram paths resolve against the corpus file's
// directory.
CaptionCorpus load_caption_corpus(const std::string& path);

}  // namespace bovw
