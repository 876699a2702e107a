#pragma once

#include "qap.hpp"

namespace bovw {

// Pearson correlation of the pixel vectors; 0 when either image is constant.
double xcorr(const GrayImage& a, const GrayImage& b);

// Max of xcorr over integer translations (dx, dy) in [-max_shift, max_shift]^2,
// each computed on the overlapping region only. max_shift = 0 reduces to xcorr.
double xcorr_shift(const GrayImage& a, const GrayImage& b, int max_shift);

// Fraction of cells whose label equals the truth label (same-word instances
// are interchangeable, so this is label-level identity).
double direct_comparison(const Layout& layout, const WordGrid& truth);

// Over all ordered 4-neighbor cell pairs of the layout, the fraction whose
// (label_a, label_b, direction) triple occurs as an adjacency somewhere in
// the truth grid. Requires a grid with at least one adjacency.
double neighbor_comparison(const Layout& layout, const WordGrid& truth);

}  // namespace bovw
