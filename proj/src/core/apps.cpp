#include "apps.hpp"

#include <algorithm>
#include <cmath>

namespace bovw {

namespace {

// Elements of a \ b with multiplicity, as word labels.
std::vector<int> multiset_difference(const BovwHistogram& a, const BovwHistogram& b) {
  std::vector<int> out;
  for (std::size_t w = 0; w < a.counts.size(); ++w)
    if (a.counts[w] > b.counts[w])
      out.insert(out.end(), a.counts[w] - b.counts[w], static_cast<int>(w));
  return out;
}

}  // namespace

std::vector<BovwHistogram> morph_sequence(const BovwHistogram& ws, const BovwHistogram& wt,
                                          std::uint64_t seed) {
  if (ws.counts.size() != wt.counts.size())
    throw InvalidInput("histograms have different vocabulary sizes");
  if (ws.total() != wt.total()) throw InvalidInput("histograms have different totals");

  std::vector<BovwHistogram> seq{ws};
  BovwHistogram current = ws;
  Rng rng(seed);
  while (current != wt) {
    std::vector<int> to_add = multiset_difference(wt, current);
    int added = to_add[rng.next_below(to_add.size())];
    ++current.counts[added];
    std::vector<int> to_remove = multiset_difference(current, wt);
    int removed = to_remove[rng.next_below(to_remove.size())];
    --current.counts[removed];
    seq.push_back(current);
  }
  return seq;
}

BovwHistogram quantize_direction(const std::vector<double>& direction, int n) {
  if (n < 1) throw InvalidInput("target count must be >= 1");
  if (direction.empty()) throw InvalidInput("empty direction vector");
  std::vector<double> x(direction.size());
  double max_x = 0.0;
  for (std::size_t j = 0; j < direction.size(); ++j) {
    x[j] = std::max(direction[j], 0.0);
    max_x = std::max(max_x, x[j]);
  }
  if (max_x <= 0.0) throw InvalidInput("no positive component to invert");

  auto l1_at = [&](double alpha) {
    long long sum = 0;
    for (double v : x) sum += std::llround(alpha * v);
    return sum;
  };
  auto hist_at = [&](double alpha) {
    BovwHistogram h;
    h.counts.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
      h.counts[j] = static_cast<std::uint32_t>(std::llround(alpha * x[j]));
    return h;
  };

  // The rounded L1 is a nondecreasing step function of alpha; bisect to the
  // jump that crosses n and keep whichever side lands closer (ties to the
  // smaller alpha, i.e. the lower side).
  double lo = 0.0, hi = (n + 1.0) / max_x;
  while (l1_at(hi) < n) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (l1_at(mid) < n)
      lo = mid;
    else
      hi = mid;
  }
  long long l1_lo = l1_at(lo), l1_hi = l1_at(hi);
  if (std::llabs(l1_hi - n) < std::llabs(n - l1_lo)) return hist_at(hi);
  return hist_at(lo);
}

BovwHistogram classifier_to_bovw(const LinearClassifier& clf, int n) {
  double norm = 0.0;
  for (double w : clf.weights) norm += w * w;
  norm = std::sqrt(norm);
  if (norm <= 0.0) throw InvalidInput("classifier weights are all zero");
  std::vector<double> direction(clf.weights.size());
  for (std::size_t j = 0; j < clf.weights.size(); ++j) direction[j] = clf.weights[j] / norm;
  return quantize_direction(direction, n);
}

std::vector<double> word_to_bovw_direction(const std::string& word,
                                           const CaptionCorpus& corpus) {
  const std::size_t n_entries = corpus.entries.size();
  if (n_entries < 2) throw InvalidInput("corpus needs at least 2 entries");
  const std::size_t k = corpus.entries.front().hist.counts.size();
  for (const auto& entry : corpus.entries)
    if (entry.hist.counts.size() != k)
      throw InvalidInput("corpus histograms have mixed vocabulary sizes");

  std::vector<double> s(n_entries, 0.0);
  bool seen = false;
  for (std::size_t i = 0; i < n_entries; ++i) {
    auto it = corpus.entries[i].words.find(word);
    if (it != corpus.entries[i].words.end()) {
      s[i] = it->second;
      seen = true;
    }
  }
  if (!seen) throw NotFound("word not in corpus: " + word);

  double s_mean = 0.0;
  for (double v : s) s_mean += v;
  s_mean /= static_cast<double>(n_entries);
  double s_var = 0.0;
  for (double v : s) s_var += (v - s_mean) * (v - s_mean);
  if (s_var <= 0.0)
    throw InvalidInput("word count is constant across corpus: " + word);

  std::vector<double> u(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double t_mean = 0.0;
    for (const auto& entry : corpus.entries) t_mean += entry.hist.counts[j];
    t_mean /= static_cast<double>(n_entries);
    double t_var = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n_entries; ++i) {
      double dt = corpus.entries[i].hist.counts[j] - t_mean;
      t_var += dt * dt;
      cov += (s[i] - s_mean) * dt;
    }
    u[j] = t_var > 0.0 ? cov / std::sqrt(s_var * t_var) : 0.0;
  }
  return u;
}

BovwHistogram sentence_to_bovw(const std::vector<std::string>& sentence,
                               const CaptionCorpus& corpus, int n,
                               std::vector<std::string>* missing) {
  std::vector<double> sum;
  int found = 0;
  for (const auto& word : sentence) {
    try {
      std::vector<double> u = word_to_bovw_direction(word, corpus);
      if (sum.empty()) sum.assign(u.size(), 0.0);
      for (std::size_t j = 0; j < u.size(); ++j) sum[j] += u[j];
      ++found;
    } catch (const NotFound&) {
      if (missing) missing->push_back(word);
    }
  }
  if (found == 0) throw InvalidInput("no sentence word found in corpus");
  for (double& v : sum) v /= found;
  return quantize_direction(sum, n);
}

}  // namespace bovw
