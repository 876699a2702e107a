#pragma once

#include <map>
#include <string>

#include "qap.hpp"

namespace bovw {

struct LinearClassifier {
  std::vector<double> weights;
  double bias = 0.0;  // ignored by inversion: it cannot change the direction
};

struct CaptionEntry {
  BovwHistogram hist;
  std::map<std::string, int> words;  // caption token -> count
};

struct CaptionCorpus {
  std::vector<CaptionEntry> entries;
};

// Morphing walk from ws to wt: each step adds one random element of wt \ Wi
// and removes one random element of Wi \ wt (multiset semantics). Returns the
// histogram at every step including both endpoints; identical endpoints give
// a length-1 sequence. Deterministic per seed.
std::vector<BovwHistogram> morph_sequence(const BovwHistogram& ws, const BovwHistogram& wt,
                                          std::uint64_t seed);

// Clips negative components of `direction` to zero and finds alpha >= 0 such
// that || round(alpha * x) ||_1 is as close to n as possible (the rounded L1
// is a nondecreasing step function that may skip n); ties resolve to the
// smaller alpha. Throws when no component is positive.
BovwHistogram quantize_direction(const std::vector<double>& direction, int n);

// x* = w / ||w||, negatives clipped to zero, then quantize_direction.
BovwHistogram classifier_to_bovw(const LinearClassifier& clf, int n);

// u[j] = Pearson correlation across corpus entries between the word's caption
// count and visual word j's count. Words absent everywhere -> NotFound;
// constant caption counts -> InvalidInput; constant t_j columns give u[j] = 0.
std::vector<double> word_to_bovw_direction(const std::string& word,
                                           const CaptionCorpus& corpus);

// Averages the direction vectors of the sentence words present in the corpus
// (absent words are skipped and reported through `missing` when given), then
// quantizes like classifier_to_bovw. Throws when no word is found.
BovwHistogram sentence_to_bovw(const std::vector<std::string>& sentence,
                               const CaptionCorpus& corpus, int n,
                               std::vector<std::string>* missing = nullptr);

}  // namespace bovw
