#pragma once

#include "core/apps.hpp"
#include "core/costs.hpp"

namespace testutil {

inline bovw::GrayImage random_image(int w, int h, std::uint64_t seed) {
  bovw::GrayImage img(w, h);
  bovw::Rng rng(seed);
  for (auto& p : img.pixels) p = static_cast<float>(rng.next_double());
  return img;
}

inline bovw::AdjacencyCost random_adjacency(int k, int radius, std::uint64_t seed) {
  bovw::AdjacencyCost ca;
  ca.k = k;
  ca.offsets = bovw::OffsetSet::square(radius);
  ca.table.resize(static_cast<std::size_t>(k) * k * ca.offsets.size());
  bovw::Rng rng(seed);
  for (auto& v : ca.table) v = static_cast<float>(rng.next_double());
  return ca;
}

inline bovw::PositionCost random_position(int k, int n, std::uint64_t seed) {
  bovw::PositionCost cp;
  cp.k = k;
  cp.n = n;
  cp.table.resize(static_cast<std::size_t>(k) * n);
  bovw::Rng rng(seed);
  for (auto& v : cp.table) v = static_cast<float>(rng.next_double());
  return cp;
}

// Random histogram over k words with total n (every word can appear).
inline bovw::BovwHistogram random_histogram(int k, int n, std::uint64_t seed) {
  bovw::BovwHistogram hist;
  hist.counts.assign(k, 0);
  bovw::Rng rng(seed);
  for (int i = 0; i < n; ++i) ++hist.counts[rng.next_below(k)];
  return hist;
}

}  // namespace testutil
