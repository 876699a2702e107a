#include "costs.hpp"

#include <algorithm>
#include <cmath>

namespace bovw {

OffsetSet OffsetSet::square(int radius) {
  if (radius < 1) throw InvalidInput("offset radius must be >= 1");
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx != 0 || dy != 0) offsets.emplace_back(dx, dy);
  return from_list(std::move(offsets));
}

OffsetSet OffsetSet::from_list(std::vector<std::pair<int, int>> offsets) {
  OffsetSet set;
  set.offsets_ = std::move(offsets);
  if (set.offsets_.empty()) throw InvalidInput("offset set must not be empty");
  set.build_lookup();
  return set;
}

void OffsetSet::build_lookup() {
  radius_ = 0;
  for (auto [dx, dy] : offsets_) {
    if (dx == 0 && dy == 0) throw InvalidInput("offset set must not contain (0,0)");
    radius_ = std::max({radius_, std::abs(dx), std::abs(dy)});
  }
  const int side = 2 * radius_ + 1;
  lookup_.assign(static_cast<std::size_t>(side) * side, -1);
  for (int i = 0; i < size(); ++i) {
    auto [dx, dy] = offsets_[i];
    int& slot = lookup_[static_cast<std::size_t>(dy + radius_) * side + (dx + radius_)];
    if (slot != -1) throw InvalidInput("duplicate offset in set");
    slot = i;
  }
  reverse_.assign(size(), -1);
  for (int i = 0; i < size(); ++i) {
    auto [dx, dy] = offsets_[i];
    reverse_[i] = index_of(-dx, -dy);
  }
}

int OffsetSet::index_of(int dx, int dy) const {
  if (std::abs(dx) > radius_ || std::abs(dy) > radius_) return -1;
  const int side = 2 * radius_ + 1;
  return lookup_[static_cast<std::size_t>(dy + radius_) * side + (dx + radius_)];
}

namespace {

void check_corpus(const std::vector<WordGrid>& corpus, int k) {
  if (corpus.empty()) return;
  const SamplingSpec& ref = corpus.front().sampling;
  for (const auto& grid : corpus) {
    if (grid.sampling != ref) throw InvalidInput("mixed grid shapes in corpus");
    for (int label : grid.labels)
      if (label < 0 || label >= k) throw InvalidInput("corpus label out of range");
  }
}

}  // namespace

AdjacencyCost learn_adjacency_cost(const std::vector<WordGrid>& corpus, int k,
                                   const OffsetSet& offsets) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  check_corpus(corpus, k);
  const int m = offsets.size();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(k) * k * m, 0);
  for (const auto& grid : corpus) {
    const int gw = grid.sampling.grid_w, gh = grid.sampling.grid_h;
    for (int row = 0; row < gh; ++row) {
      for (int col = 0; col < gw; ++col) {
        int i = grid.labels[static_cast<std::size_t>(row) * gw + col];
        for (int d = 0; d < m; ++d) {
          auto [dx, dy] = offsets.offset(d);
          int nc = col + dx, nr = row + dy;
          if (nc < 0 || nc >= gw || nr < 0 || nr >= gh) continue;
          int j = grid.labels[static_cast<std::size_t>(nr) * gw + nc];
          ++counts[(static_cast<std::size_t>(i) * k + j) * m + d];
        }
      }
    }
  }
  AdjacencyCost cost;
  cost.k = k;
  cost.offsets = offsets;
  cost.table.assign(counts.size(), 0.0f);
  for (int i = 0; i < k; ++i) {
    for (int d = 0; d < m; ++d) {
      double row_sum = 0.0;
      for (int j = 0; j < k; ++j)
        row_sum += static_cast<double>(counts[(static_cast<std::size_t>(i) * k + j) * m + d]) + 1.0;
      for (int j = 0; j < k; ++j) {
        std::size_t idx = (static_cast<std::size_t>(i) * k + j) * m + d;
        double p = (static_cast<double>(counts[idx]) + 1.0) / row_sum;
        cost.table[idx] = static_cast<float>(-std::log(p));
      }
    }
  }
  return cost;
}

PositionCost learn_position_cost(const std::vector<WordGrid>& corpus, int k,
                                 const SamplingSpec& sampling) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  check_corpus(corpus, k);
  if (!corpus.empty() && corpus.front().sampling != sampling)
    throw InvalidInput("corpus grid shape does not match sampling spec");
  const int n = sampling.cell_count();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(k) * n, 0);
  for (const auto& grid : corpus)
    for (int place = 0; place < n; ++place)
      ++counts[static_cast<std::size_t>(grid.labels[place]) * n + place];
  PositionCost cost;
  cost.k = k;
  cost.n = n;
  cost.table.assign(counts.size(), 0.0f);
  for (int i = 0; i < k; ++i) {
    double row_sum = 0.0;
    for (int place = 0; place < n; ++place)
      row_sum += static_cast<double>(counts[static_cast<std::size_t>(i) * n + place]) + 1.0;
    for (int place = 0; place < n; ++place) {
      std::size_t idx = static_cast<std::size_t>(i) * n + place;
      double p = (static_cast<double>(counts[idx]) + 1.0) / row_sum;
      cost.table[idx] = static_cast<float>(-std::log(p));
    }
  }
  return cost;
}

}  // namespace bovw
