#pragma once

#include <cstdint>
#include <vector>

#include "pipeline.hpp"

namespace bovw {

// Relative grid displacements considered "adjacent". The default is the
// (2r+1)^2 - 1 displacements of a square of radius r = 3 (48 neighbors).
class OffsetSet {
 public:
  static OffsetSet square(int radius = 3);
  // Explicit displacement list; must not contain (0,0) or duplicates.
  static OffsetSet from_list(std::vector<std::pair<int, int>> offsets);

  int size() const { return static_cast<int>(offsets_.size()); }
  std::pair<int, int> offset(int index) const { return offsets_[index]; }
  // Index of displacement (dx, dy), or -1 when outside the set.
  int index_of(int dx, int dy) const;
  // Index of the reversed displacement for each entry.
  int reverse_index(int index) const { return reverse_[index]; }

  bool operator==(const OffsetSet&) const = default;

 private:
  std::vector<std::pair<int, int>> offsets_;
  std::vector<int> reverse_;
  int radius_ = 0;                 // bounding radius of the lookup table
  std::vector<int> lookup_;        // (2*radius_+1)^2 entries, -1 where absent
  void build_lookup();
};

// table[i][j][d] = -log P(word j at displacement d | word i), add-one smoothed.
struct AdjacencyCost {
  int k = 0;
  OffsetSet offsets;
  std::vector<float> table;  // k * k * m, index ((i*k)+j)*m + d

  float at(int i, int j, int d) const {
    return table[(static_cast<std::size_t>(i) * k + j) * offsets.size() + d];
  }
};

// table[i][kk] = -log P(place kk | word i), add-one smoothed.
struct PositionCost {
  int k = 0;
  int n = 0;  // place count
  std::vector<float> table;  // k * n

  float at(int i, int place) const {
    return table[static_cast<std::size_t>(i) * n + place];
  }
};

// Counts ordered word pairs per displacement over the corpus, +1 smoothing,
// normalizes over j for each (i, d), stores -log. Pairs whose neighbor cell
// falls outside the grid are skipped. An empty corpus yields the uniform
// table -log(1/k).
AdjacencyCost learn_adjacency_cost(const std::vector<WordGrid>& corpus, int k,
                                   const OffsetSet& offsets);

// Counts word occurrences per place, +1 smoothing, per-word normalization
// over places, -log. `sampling` fixes the place count when the corpus is
// empty; non-empty corpora must match it.
PositionCost learn_position_cost(const std::vector<WordGrid>& corpus, int k,
                                 const SamplingSpec& sampling);

}  // namespace bovw
