#include <cmath>

#include "core/apps.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bovw;

namespace {

BovwHistogram hist(std::vector<std::uint32_t> counts) {
  BovwHistogram h;
  h.counts = std::move(counts);
  return h;
}

long long l1_distance(const BovwHistogram& a, const BovwHistogram& b) {
  long long d = 0;
  for (std::size_t i = 0; i < a.counts.size(); ++i)
    d += std::llabs(static_cast<long long>(a.counts[i]) - static_cast<long long>(b.counts[i]));
  return d;
}

}  // namespace

TEST_CASE("morph endpoints and step structure") {
  auto seq = morph_sequence(hist({2, 0}), hist({0, 2}), 7);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == hist({2, 0}));
  CHECK(seq[1] == hist({1, 1}));
  CHECK(seq[2] == hist({0, 2}));

  CHECK(morph_sequence(hist({3, 1}), hist({3, 1}), 0).size() == 1);

  auto ws = testutil::random_histogram(8, 20, 1);
  auto wt = testutil::random_histogram(8, 20, 2);
  auto walk = morph_sequence(ws, wt, 42);
  CHECK(walk.front() == ws);
  CHECK(walk.back() == wt);
  long long diff = 0;
  for (std::size_t w = 0; w < ws.counts.size(); ++w)
    if (wt.counts[w] > ws.counts[w]) diff += wt.counts[w] - ws.counts[w];
  CHECK(static_cast<long long>(walk.size()) == diff + 1);
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    CHECK(walk[i].total() == 20);
    CHECK(l1_distance(walk[i], walk[i + 1]) == 2);
  }
  // deterministic per seed
  CHECK(morph_sequence(ws, wt, 42) == walk);

  CHECK_THROWS_AS(morph_sequence(hist({1, 0}), hist({1, 1}), 0), InvalidInput);
  CHECK_THROWS_AS(morph_sequence(hist({1}), hist({0, 1}), 0), InvalidInput);
}

TEST_CASE("classifier inversion hand examples") {
  CHECK(classifier_to_bovw({{3.0, 4.0}, 0.0}, 7).counts ==
        std::vector<std::uint32_t>{3, 4});
  CHECK(classifier_to_bovw({{1.0, -1.0}, 0.5}, 3).counts ==
        std::vector<std::uint32_t>{3, 0});
  CHECK(classifier_to_bovw({{1.0, 1.0}, 0.0}, 2).counts ==
        std::vector<std::uint32_t>{1, 1});
  CHECK_THROWS_AS(classifier_to_bovw({{-1.0, -2.0}, 0.0}, 3), InvalidInput);
  CHECK_THROWS_AS(classifier_to_bovw({{0.0, 0.0}, 0.0}, 3), InvalidInput);
}

TEST_CASE("classifier inversion is positive-scale invariant") {
  LinearClassifier clf{{0.3, -0.2, 1.7, 0.05, 0.9}, 0.4};
  auto reference = classifier_to_bovw(clf, 25);
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    double scale = 0.01 + 100.0 * rng.next_double();
    LinearClassifier scaled = clf;
    for (auto& w : scaled.weights) w *= scale;
    CHECK(classifier_to_bovw(scaled, 25).counts == reference.counts);
  }
}

TEST_CASE("quantized direction is as close to n as the alpha grid allows") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> dir(5);
    for (auto& v : dir) v = rng.next_double() * 2.0 - 0.5;
    bool positive = false;
    for (double v : dir) positive |= v > 0.0;
    if (!positive) continue;
    int n = 1 + static_cast<int>(rng.next_below(30));
    auto result = quantize_direction(dir, n);
    long long got = 0;
    for (auto c : result.counts) got += c;

    // dense alpha scan oracle
    double max_x = 0.0;
    for (double v : dir) max_x = std::max(max_x, v);
    long long best = 0;
    for (int step = 0; step <= 200000; ++step) {
      double alpha = (n + 1.0) / max_x * step / 200000.0;
      long long l1 = 0;
      for (double v : dir) l1 += std::llround(alpha * std::max(v, 0.0));
      if (std::llabs(l1 - n) < std::llabs(best - n)) best = l1;
    }
    CHECK(std::llabs(got - n) <= std::llabs(best - n));
  }
}

TEST_CASE("word directions are per-coordinate Pearson correlations") {
  CaptionCorpus corpus;
  corpus.entries.push_back({hist({3, 1, 5}), {{"cat", 3}, {"sun", 1}}});
  corpus.entries.push_back({hist({1, 2, 5}), {{"cat", 1}}});
  corpus.entries.push_back({hist({2, 2, 5}), {{"cat", 2}, {"sun", 1}}});

  auto u = word_to_bovw_direction("cat", corpus);
  REQUIRE(u.size() == 3);
  // visual word 0 counts equal the caption counts: perfect correlation
  CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-12));
  // direct Pearson for coordinate 1: s = [3,1,2], t = [1,2,2]
  double expected = -0.5;  // cov=-0.5, sd_s=1, sd_t=sqrt(2/3) -> r = -0.6123...
  {
    double sm = 2.0, tm = 5.0 / 3.0, cov = 0.0, sv = 0.0, tv = 0.0;
    double s[3] = {3, 1, 2}, t[3] = {1, 2, 2};
    for (int i = 0; i < 3; ++i) {
      cov += (s[i] - sm) * (t[i] - tm);
      sv += (s[i] - sm) * (s[i] - sm);
      tv += (t[i] - tm) * (t[i] - tm);
    }
    expected = cov / std::sqrt(sv * tv);
  }
  CHECK(u[1] == doctest::Approx(expected).epsilon(1e-12));
  // constant visual word: zero by convention
  CHECK(u[2] == 0.0);
  for (double v : u) {
    CHECK(v >= -1.0 - 1e-12);
    CHECK(v <= 1.0 + 1e-12);
  }

  CHECK_THROWS_AS(word_to_bovw_direction("dog", corpus), NotFound);
  // "sun" appears with the same count (1) in entries 0 and 2 and 0 in entry 1:
  // non-constant, fine; a truly constant word must throw
  CaptionCorpus constant;
  constant.entries.push_back({hist({1, 2}), {{"a", 2}}});
  constant.entries.push_back({hist({2, 1}), {{"a", 2}}});
  CHECK_THROWS_AS(word_to_bovw_direction("a", constant), InvalidInput);
}

TEST_CASE("sentence conversion averages word directions") {
  CaptionCorpus corpus;
  // word "x" tracks visual word 0, word "y" tracks visual word 1
  corpus.entries.push_back({hist({4, 0, 1}), {{"x", 4}}});
  corpus.entries.push_back({hist({0, 4, 1}), {{"y", 4}}});
  corpus.entries.push_back({hist({2, 2, 1}), {{"x", 2}, {"y", 2}}});

  auto single = sentence_to_bovw({"x"}, corpus, 5);
  auto direct = quantize_direction(word_to_bovw_direction("x", corpus), 5);
  CHECK(single.counts == direct.counts);

  // duplicates do not change the average
  CHECK(sentence_to_bovw({"x", "x"}, corpus, 5).counts == single.counts);

  // "p" tracks visual word 0 exactly, "q" tracks word 1, and their caption
  // counts are uncorrelated: directions e0 and e1, average [0.5, 0.5]
  CaptionCorpus ortho;
  ortho.entries.push_back({hist({2, 1}), {{"p", 2}, {"q", 1}}});
  ortho.entries.push_back({hist({0, 1}), {{"q", 1}}});
  ortho.entries.push_back({hist({1, 0}), {{"p", 1}}});
  auto up = word_to_bovw_direction("p", ortho);
  auto uq = word_to_bovw_direction("q", ortho);
  CHECK(up[0] == doctest::Approx(1.0));
  CHECK(up[1] == doctest::Approx(0.0));
  CHECK(uq[0] == doctest::Approx(0.0));
  CHECK(uq[1] == doctest::Approx(1.0));
  auto pq = sentence_to_bovw({"p", "q"}, ortho, 4);
  CHECK(pq.counts == std::vector<std::uint32_t>{2, 2});

  std::vector<std::string> missing;
  auto skipped = sentence_to_bovw({"x", "zzz"}, corpus, 5, &missing);
  CHECK(skipped.counts == single.counts);
  REQUIRE(missing.size() == 1);
  CHECK(missing[0] == "zzz");

  CHECK_THROWS_AS(sentence_to_bovw({"zzz"}, corpus, 5), InvalidInput);
}
