#include "qap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bovw {

namespace {

void check_tables(const AdjacencyCost& ca, const PositionCost& cp, int n_places) {
  if (ca.k != cp.k) throw InvalidInput("adjacency and position tables disagree on K");
  if (cp.n != n_places) throw InvalidInput("position table place count does not match grid");
}

void check_layout(const Layout& layout, int k) {
  if (static_cast<int>(layout.labels.size()) != layout.sampling.cell_count())
    throw InvalidInput("layout label count does not match grid");
  for (int label : layout.labels)
    if (label < 0 || label >= k) throw InvalidInput("layout label out of range");
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInput("lambda must be in [0,1]");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL));
  return r.next_u64();
}

// Compact working representation for the solvers: labels remapped to a dense
// range [0, L), cost tables pre-weighted by lambda, and two label-major copies
// of the adjacency table so that hill-climb bookkeeping touches contiguous
// rows.
class Evaluator {
 public:
  Evaluator(const SamplingSpec& sampling, const AdjacencyCost& ca, const PositionCost& cp,
            double lambda, const std::vector<int>& labels_present)
      : grid_w_(sampling.grid_w),
        grid_h_(sampling.grid_h),
        n_(sampling.cell_count()),
        m_(ca.offsets.size()) {
    full_of_ = labels_present;
    std::sort(full_of_.begin(), full_of_.end());
    full_of_.erase(std::unique(full_of_.begin(), full_of_.end()), full_of_.end());
    l_ = static_cast<int>(full_of_.size());

    const double wa = 1.0 - lambda;
    out_.assign(static_cast<std::size_t>(l_) * m_ * l_, 0.0f);
    in_.assign(out_.size(), 0.0f);
    for (int x = 0; x < l_; ++x)
      for (int y = 0; y < l_; ++y)
        for (int d = 0; d < m_; ++d) {
          float v = static_cast<float>(wa * ca.at(full_of_[x], full_of_[y], d));
          out_[(static_cast<std::size_t>(x) * m_ + d) * l_ + y] = v;
          in_[(static_cast<std::size_t>(y) * m_ + d) * l_ + x] = v;
        }
    wpos_.assign(static_cast<std::size_t>(l_) * n_, 0.0f);
    for (int x = 0; x < l_; ++x)
      for (int place = 0; place < n_; ++place)
        wpos_[static_cast<std::size_t>(x) * n_ + place] =
            static_cast<float>(lambda * cp.at(full_of_[x], place));

    // Per-cell neighbor entries carrying the cost index of both directions
    // (either may be absent for asymmetric offset sets).
    neighbors_.resize(n_);
    for (int row = 0; row < grid_h_; ++row) {
      for (int col = 0; col < grid_w_; ++col) {
        auto& list = neighbors_[row * grid_w_ + col];
        for (int d = 0; d < m_; ++d) {
          auto [dx, dy] = ca.offsets.offset(d);
          int nc = col + dx, nr = row + dy;
          if (nc >= 0 && nc < grid_w_ && nr >= 0 && nr < grid_h_)
            list.push_back({nr * grid_w_ + nc, d, ca.offsets.index_of(-dx, -dy)});
        }
        for (int d = 0; d < m_; ++d) {
          auto [dx, dy] = ca.offsets.offset(d);
          if (ca.offsets.index_of(-dx, -dy) >= 0) continue;  // already covered above
          int nc = col - dx, nr = row - dy;
          if (nc >= 0 && nc < grid_w_ && nr >= 0 && nr < grid_h_)
            list.push_back({nr * grid_w_ + nc, -1, d});
        }
      }
    }
  }

  int size() const { return n_; }
  int label_count() const { return l_; }

  std::vector<int> to_compact(const std::vector<int>& labels) const {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto it = std::lower_bound(full_of_.begin(), full_of_.end(), labels[i]);
      if (it == full_of_.end() || *it != labels[i])
        throw InvalidInput("label not present in evaluator");
      out[i] = static_cast<int>(it - full_of_.begin());
    }
    return out;
  }

  std::vector<int> to_full(const std::vector<int>& clabels) const {
    std::vector<int> out(clabels.size());
    for (std::size_t i = 0; i < clabels.size(); ++i) out[i] = full_of_[clabels[i]];
    return out;
  }

  // double-valued accessors: all arithmetic on the float tables must happen
  // at double precision so deltas match full recomputation to ~1e-9
  double adj(int x, int y, int d) const {
    return out_[(static_cast<std::size_t>(x) * m_ + d) * l_ + y];
  }
  double pos(int x, int place) const { return wpos_[static_cast<std::size_t>(x) * n_ + place]; }

  double objective(const std::vector<int>& c) const {
    double total = 0.0;
    for (int cell = 0; cell < n_; ++cell) {
      total += pos(c[cell], cell);
      for (const auto& nb : neighbors_[cell])
        if (nb.out_d >= 0) total += adj(c[cell], c[nb.cell], nb.out_d);
    }
    return total;
  }

  double swap_delta(const std::vector<int>& c, int a, int b) const {
    if (a == b) return 0.0;
    int la = c[a], lb = c[b];
    if (la == lb) return 0.0;
    auto after = [&](int cell) { return cell == a ? lb : (cell == b ? la : c[cell]); };
    double delta = pos(lb, a) + pos(la, b) - pos(la, a) - pos(lb, b);
    for (int z : {a, b}) {
      for (const auto& nb : neighbors_[z]) {
        if (nb.out_d >= 0)
          delta += adj(after(z), after(nb.cell), nb.out_d) - adj(c[z], c[nb.cell], nb.out_d);
        if (nb.in_d >= 0 && nb.cell != a && nb.cell != b)
          delta += adj(after(nb.cell), after(z), nb.in_d) - adj(c[nb.cell], c[z], nb.in_d);
      }
    }
    return delta;
  }

  // Best-improvement descent. Maintains candidate[cell][x] = change of all
  // pair terms touching `cell` if its label were x, so a full sweep over cell
  // pairs costs O(N^2) instead of O(N^2 m).
  void hill_climb(std::vector<int>& c, double eps, long max_moves = -1) const {
    std::vector<double> cand(static_cast<std::size_t>(n_) * l_, 0.0);
    for (int cell = 0; cell < n_; ++cell) {
      double* row = cand.data() + static_cast<std::size_t>(cell) * l_;
      for (const auto& nb : neighbors_[cell]) {
        int ln = c[nb.cell];
        if (nb.out_d >= 0) {
          const float* src = &in_[(static_cast<std::size_t>(ln) * m_ + nb.out_d) * l_];
          for (int x = 0; x < l_; ++x) row[x] += src[x];
        }
        if (nb.in_d >= 0) {
          const float* src = &out_[(static_cast<std::size_t>(ln) * m_ + nb.in_d) * l_];
          for (int x = 0; x < l_; ++x) row[x] += src[x];
        }
      }
    }

    std::vector<int> mark(n_, -1);  // neighbor-entry index + 1, keyed by cell
    long moves = 0;
    for (;;) {
      if (max_moves >= 0 && moves >= max_moves) break;
      double best_delta = 0.0;
      int best_a = -1, best_b = -1;
      for (int a = 0; a < n_; ++a) {
        const auto& nbs = neighbors_[a];
        for (std::size_t i = 0; i < nbs.size(); ++i) mark[nbs[i].cell] = static_cast<int>(i) + 1;
        const double* row_a = cand.data() + static_cast<std::size_t>(a) * l_;
        int la = c[a];
        double base_a = pos(la, a) + row_a[la];
        for (int b = a + 1; b < n_; ++b) {
          int lb = c[b];
          if (la == lb) continue;
          const double* row_b = cand.data() + static_cast<std::size_t>(b) * l_;
          double delta = pos(lb, a) + row_a[lb] - base_a + pos(la, b) + row_b[la] -
                         pos(lb, b) - row_b[lb];
          if (mark[b] > 0) {
            // a and b are mutual neighbors: the candidate rows double-count
            // the pair's own terms, so replace them with the true change.
            const auto& nb = nbs[mark[b] - 1];
            for (int d : {nb.out_d, nb.in_d})
              if (d >= 0)
                delta += adj(lb, la, d) + adj(la, lb, d) - adj(lb, lb, d) - adj(la, la, d);
          }
          if (delta < best_delta) {
            best_delta = delta;
            best_a = a;
            best_b = b;
          }
        }
        for (const auto& nb : nbs) mark[nb.cell] = -1;
      }
      if (best_a < 0 || best_delta >= -eps) break;

      // apply the swap and refresh the candidate rows of both neighborhoods
      int la = c[best_a], lb = c[best_b];
      c[best_a] = lb;
      c[best_b] = la;
      struct Change { int cell; int from; int to; };
      for (Change ch : {Change{best_a, la, lb}, Change{best_b, lb, la}}) {
        for (const auto& nb : neighbors_[ch.cell]) {
          double* row = cand.data() + static_cast<std::size_t>(nb.cell) * l_;
          if (nb.in_d >= 0) {
            // (nb.cell -> ch.cell) terms: wadj(x, label(ch.cell), in_d)
            const float* add = &in_[(static_cast<std::size_t>(ch.to) * m_ + nb.in_d) * l_];
            const float* sub = &in_[(static_cast<std::size_t>(ch.from) * m_ + nb.in_d) * l_];
            for (int x = 0; x < l_; ++x) row[x] += static_cast<double>(add[x]) - sub[x];
          }
          if (nb.out_d >= 0) {
            // (ch.cell -> nb.cell) terms: wadj(label(ch.cell), x, out_d)
            const float* add = &out_[(static_cast<std::size_t>(ch.to) * m_ + nb.out_d) * l_];
            const float* sub = &out_[(static_cast<std::size_t>(ch.from) * m_ + nb.out_d) * l_];
            for (int x = 0; x < l_; ++x) row[x] += static_cast<double>(add[x]) - sub[x];
          }
        }
      }
      ++moves;
    }
  }

 private:
  struct Neighbor {
    int cell;
    int out_d;  // index of d(this -> cell), or -1
    int in_d;   // index of d(cell -> this), or -1
  };

  int grid_w_, grid_h_, n_, m_;
  int l_ = 0;
  std::vector<int> full_of_;
  std::vector<float> out_;   // [l1][d][l2]
  std::vector<float> in_;    // [l2][d][l1]
  std::vector<float> wpos_;  // [l][place]
  std::vector<std::vector<Neighbor>> neighbors_;
};

std::vector<int> present_labels(const BovwHistogram& hist) {
  std::vector<int> labels;
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    if (hist.counts[i] > 0) labels.push_back(static_cast<int>(i));
  return labels;
}

std::vector<int> expand_histogram(const BovwHistogram& hist) {
  std::vector<int> labels;
  for (std::size_t w = 0; w < hist.counts.size(); ++w)
    labels.insert(labels.end(), hist.counts[w], static_cast<int>(w));
  return labels;
}

void check_histogram(const BovwHistogram& hist, const SamplingSpec& sampling, int k) {
  if (static_cast<int>(hist.counts.size()) != k)
    throw InvalidInput("histogram word count does not match cost tables");
  if (hist.total() != static_cast<std::uint64_t>(sampling.cell_count()))
    throw InvalidInput("histogram total does not match place count");
}

}  // namespace

void SolverConfig::validate() const {
  check_lambda(lambda);
  if (population < 2) throw InvalidInput("population must be >= 2");
  if (!(replace_prob > 0.0 && replace_prob < 1.0))
    throw InvalidInput("replace_prob must be in (0,1)");
  if (max_generations < 0) throw InvalidInput("max_generations must be >= 0");
  if (convergence_eps < 0.0) throw InvalidInput("convergence_eps must be >= 0");
  if (sa_iterations < 0) throw InvalidInput("sa_iterations must be >= 0");
}

double objective(const Layout& layout, const AdjacencyCost& ca, const PositionCost& cp,
                 double lambda) {
  check_lambda(lambda);
  check_layout(layout, ca.k);
  check_tables(ca, cp, layout.sampling.cell_count());
  const int gw = layout.sampling.grid_w, gh = layout.sampling.grid_h;
  const int m = ca.offsets.size();
  double adjacency = 0.0, position = 0.0;
  for (int row = 0; row < gh; ++row) {
    for (int col = 0; col < gw; ++col) {
      int place = row * gw + col;
      int i = layout.labels[place];
      position += cp.at(i, place);
      for (int d = 0; d < m; ++d) {
        auto [dx, dy] = ca.offsets.offset(d);
        int nc = col + dx, nr = row + dy;
        if (nc < 0 || nc >= gw || nr < 0 || nr >= gh) continue;
        adjacency += ca.at(i, layout.labels[nr * gw + nc], d);
      }
    }
  }
  return (1.0 - lambda) * adjacency + lambda * position;
}

double lawler_coefficient(int word_i, int word_j, int place_k, int place_l,
                          const AdjacencyCost& ca, const PositionCost& cp, double lambda,
                          int grid_w, int grid_h) {
  check_lambda(lambda);
  const int n = grid_w * grid_h;
  if (word_i < 0 || word_i >= ca.k || word_j < 0 || word_j >= ca.k)
    throw InvalidInput("word index out of range");
  if (place_k < 0 || place_k >= n || place_l < 0 || place_l >= n)
    throw InvalidInput("place index out of range");
  int dx = place_l % grid_w - place_k % grid_w;
  int dy = place_l / grid_w - place_k / grid_w;
  int d = ca.offsets.index_of(dx, dy);
  double adjacency = d >= 0 ? ca.at(word_i, word_j, d) : 0.0;
  return (1.0 - lambda) * adjacency + lambda / n * cp.at(word_i, place_k);
}

double swap_delta(const Layout& layout, int cell_a, int cell_b, const AdjacencyCost& ca,
                  const PositionCost& cp, double lambda) {
  check_lambda(lambda);
  check_layout(layout, ca.k);
  check_tables(ca, cp, layout.sampling.cell_count());
  const int n = layout.sampling.cell_count();
  if (cell_a < 0 || cell_a >= n || cell_b < 0 || cell_b >= n)
    throw InvalidInput("cell index out of range");
  if (cell_a == cell_b) return 0.0;
  const int gw = layout.sampling.grid_w, gh = layout.sampling.grid_h;
  const int m = ca.offsets.size();
  const auto& labels = layout.labels;
  int la = labels[cell_a], lb = labels[cell_b];
  if (la == lb) return 0.0;
  auto after = [&](int cell) { return cell == cell_a ? lb : (cell == cell_b ? la : labels[cell]); };

  // accumulate in double: float-precision intermediates would miss the 1e-9
  // agreement with full recomputation
  double position = static_cast<double>(cp.at(lb, cell_a)) + cp.at(la, cell_b) -
                    cp.at(la, cell_a) - cp.at(lb, cell_b);
  double adjacency = 0.0;
  for (int z : {cell_a, cell_b}) {
    int col = z % gw, row = z / gw;
    for (int d = 0; d < m; ++d) {
      auto [dx, dy] = ca.offsets.offset(d);
      int oc = col + dx, orow = row + dy;
      if (oc >= 0 && oc < gw && orow >= 0 && orow < gh) {
        int other = orow * gw + oc;
        adjacency += static_cast<double>(ca.at(after(z), after(other), d)) -
                     ca.at(labels[z], labels[other], d);
      }
      int ic = col - dx, irow = row - dy;
      if (ic >= 0 && ic < gw && irow >= 0 && irow < gh) {
        int source = irow * gw + ic;
        if (source == cell_a || source == cell_b) continue;  // already counted above
        adjacency += static_cast<double>(ca.at(after(source), after(z), d)) -
                     ca.at(labels[source], labels[z], d);
      }
    }
  }
  return (1.0 - lambda) * adjacency + lambda * position;
}

Layout random_layout(const BovwHistogram& hist, const SamplingSpec& sampling,
                     std::uint64_t seed) {
  if (hist.total() != static_cast<std::uint64_t>(sampling.cell_count()))
    throw InvalidInput("histogram total does not match place count");
  Layout layout;
  layout.sampling = sampling;
  layout.labels = expand_histogram(hist);
  Rng rng(seed);
  for (std::size_t i = layout.labels.size(); i > 1; --i) {
    std::size_t j = rng.next_below(i);
    std::swap(layout.labels[i - 1], layout.labels[j]);
  }
  return layout;
}

Layout hill_climb(const Layout& layout, const AdjacencyCost& ca, const PositionCost& cp,
                  double lambda, double eps, long max_moves) {
  check_lambda(lambda);
  check_layout(layout, ca.k);
  check_tables(ca, cp, layout.sampling.cell_count());
  Evaluator eval(layout.sampling, ca, cp, lambda, layout.labels);
  std::vector<int> c = eval.to_compact(layout.labels);
  eval.hill_climb(c, eps, max_moves);
  Layout out;
  out.sampling = layout.sampling;
  out.labels = eval.to_full(c);
  return out;
}

Layout simulated_annealing(const BovwHistogram& hist, const SamplingSpec& sampling,
                           const AdjacencyCost& ca, const PositionCost& cp,
                           const SolverConfig& config) {
  config.validate();
  check_histogram(hist, sampling, ca.k);
  check_tables(ca, cp, sampling.cell_count());
  Layout initial = random_layout(hist, sampling, config.seed);
  Evaluator eval(sampling, ca, cp, config.lambda, present_labels(hist));
  std::vector<int> current = eval.to_compact(initial.labels);
  std::vector<int> best = current;
  double current_obj = eval.objective(current);
  double best_obj = current_obj;
  const int n = sampling.cell_count();
  Rng rng(mix_seed(config.seed, 0x5a5a5a5aULL));
  double temp = config.sa_initial_temp;
  for (long iter = 0; iter < config.sa_iterations && n > 1; ++iter) {
    int a = static_cast<int>(rng.next_below(n));
    int b = static_cast<int>(rng.next_below(n - 1));
    if (b >= a) ++b;
    double delta = eval.swap_delta(current, a, b);
    bool accept = delta <= 0.0;
    if (!accept && temp > 0.0) accept = rng.next_double() < std::exp(-delta / temp);
    if (accept) {
      std::swap(current[a], current[b]);
      current_obj += delta;
      if (current_obj < best_obj) {
        best_obj = current_obj;
        best = current;
      }
    }
    temp *= config.sa_decay;
  }
  Layout out;
  out.sampling = sampling;
  out.labels = eval.to_full(best);
  return out;
}

Layout brute_force_solve(const BovwHistogram& hist, const SamplingSpec& sampling,
                         const AdjacencyCost& ca, const PositionCost& cp, double lambda) {
  check_lambda(lambda);
  check_histogram(hist, sampling, ca.k);
  check_tables(ca, cp, sampling.cell_count());
  const int n = sampling.cell_count();
  // multiset permutation count N! / prod(count_w!)
  double log_count = std::lgamma(n + 1.0);
  for (auto c : hist.counts)
    if (c > 1) log_count -= std::lgamma(static_cast<double>(c) + 1.0);
  if (log_count > std::log(1e7)) throw InvalidInput("instance too large for brute force");

  Evaluator eval(sampling, ca, cp, lambda, present_labels(hist));
  std::vector<int> labels = eval.to_compact(expand_histogram(hist));
  std::sort(labels.begin(), labels.end());
  std::vector<int> best = labels;
  double best_obj = eval.objective(labels);
  while (std::next_permutation(labels.begin(), labels.end())) {
    double obj = eval.objective(labels);
    if (obj < best_obj) {
      best_obj = obj;
      best = labels;
    }
  }
  Layout out;
  out.sampling = sampling;
  out.labels = eval.to_full(best);
  return out;
}

Layout crossover(const Layout& parent_a, const Layout& parent_b, const AdjacencyCost& ca,
                 const PositionCost& cp, double lambda, Rng& rng) {
  check_lambda(lambda);
  check_layout(parent_a, ca.k);
  check_layout(parent_b, ca.k);
  if (parent_a.sampling != parent_b.sampling) throw InvalidInput("parent grids differ");
  check_tables(ca, cp, parent_a.sampling.cell_count());
  {
    std::vector<std::uint32_t> ha(ca.k, 0), hb(ca.k, 0);
    for (int label : parent_a.labels) ++ha[label];
    for (int label : parent_b.labels) ++hb[label];
    if (ha != hb) throw InvalidInput("parents pool to different histograms");
  }

  const int gw = parent_a.sampling.grid_w, gh = parent_a.sampling.grid_h;
  const int n = gw * gh;
  const int m = ca.offsets.size();
  Layout child;
  child.sampling = parent_a.sampling;
  child.labels.assign(n, -1);
  std::vector<std::uint32_t> available(ca.k, 0);
  std::vector<int> unfilled;
  for (int place = 0; place < n; ++place) {
    if (parent_a.labels[place] == parent_b.labels[place]) {
      child.labels[place] = parent_a.labels[place];
    } else {
      ++available[parent_a.labels[place]];
      unfilled.push_back(place);
    }
  }

  while (!unfilled.empty()) {
    std::size_t pick = rng.next_below(unfilled.size());
    int place = unfilled[pick];
    unfilled.erase(unfilled.begin() + static_cast<std::ptrdiff_t>(pick));
    int col = place % gw, row = place / gw;
    int best_label = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int x = 0; x < ca.k; ++x) {
      if (available[x] == 0) continue;
      double adjacency = 0.0;
      for (int d = 0; d < m; ++d) {
        auto [dx, dy] = ca.offsets.offset(d);
        int oc = col + dx, orow = row + dy;
        if (oc >= 0 && oc < gw && orow >= 0 && orow < gh) {
          int other = child.labels[orow * gw + oc];
          if (other >= 0) adjacency += ca.at(x, other, d);
        }
        int ic = col - dx, irow = row - dy;
        if (ic >= 0 && ic < gw && irow >= 0 && irow < gh) {
          int source = child.labels[irow * gw + ic];
          if (source >= 0) adjacency += ca.at(source, x, d);
        }
      }
      double cost = (1.0 - lambda) * adjacency + lambda * cp.at(x, place);
      if (cost < best_cost) {
        best_cost = cost;
        best_label = x;
      }
    }
    child.labels[place] = best_label;
    --available[best_label];
  }
  return child;
}

int similarity(const Layout& a, const Layout& b) {
  if (a.sampling != b.sampling) throw InvalidInput("layout shapes differ");
  int count = 0;
  for (std::size_t i = 0; i < a.labels.size(); ++i)
    if (a.labels[i] == b.labels[i]) ++count;
  return count;
}

Layout ga_hc_solve(const BovwHistogram& hist, const SamplingSpec& sampling,
                   const AdjacencyCost& ca, const PositionCost& cp,
                   const SolverConfig& config) {
  config.validate();
  check_histogram(hist, sampling, ca.k);
  check_tables(ca, cp, sampling.cell_count());
  Evaluator eval(sampling, ca, cp, config.lambda, present_labels(hist));

  struct Member {
    std::vector<int> labels;  // compact
    double obj;
  };
  const int np = config.population;
  std::vector<Member> population;
  population.reserve(np + 1);
  for (int i = 0; i < np; ++i) {
    Layout layout = random_layout(hist, sampling, mix_seed(config.seed, i));
    std::vector<int> c = eval.to_compact(layout.labels);
    eval.hill_climb(c, config.convergence_eps);
    double obj = eval.objective(c);
    population.push_back({std::move(c), obj});
  }

  auto agreement = [&](const Member& a, const Member& b) {
    int count = 0;
    for (std::size_t i = 0; i < a.labels.size(); ++i)
      if (a.labels[i] == b.labels[i]) ++count;
    return count;
  };
  auto worst_index = [&] {
    int worst = 0;
    for (std::size_t i = 1; i < population.size(); ++i)
      if (population[i].obj > population[worst].obj) worst = static_cast<int>(i);
    return worst;
  };

  Rng rng(mix_seed(config.seed, 0xc3c3c3c3ULL));
  for (int gen = 0; gen < config.max_generations; ++gen) {
    double lo = population[0].obj, hi = population[0].obj;
    for (const auto& member : population) {
      lo = std::min(lo, member.obj);
      hi = std::max(hi, member.obj);
    }
    if (hi - lo < config.convergence_eps) break;

    std::size_t i1 = rng.next_below(population.size());
    std::size_t i2 = rng.next_below(population.size() - 1);
    if (i2 >= i1) ++i2;
    Layout pa{sampling, eval.to_full(population[i1].labels)};
    Layout pb{sampling, eval.to_full(population[i2].labels)};
    Layout child_layout = crossover(pa, pb, ca, cp, config.lambda, rng);
    std::vector<int> child = eval.to_compact(child_layout.labels);
    eval.hill_climb(child, config.convergence_eps);
    double child_obj = eval.objective(child);

    int worst = worst_index();
    if (child_obj >= population[worst].obj) continue;
    population.push_back({std::move(child), child_obj});
    if (rng.next_double() < config.replace_prob) {
      // drop the worse member of the most similar pair
      int best_sim = -1;
      std::size_t drop = 0;
      for (std::size_t u = 0; u + 1 < population.size(); ++u) {
        for (std::size_t v = u + 1; v < population.size(); ++v) {
          int sim = agreement(population[u], population[v]);
          if (sim > best_sim) {
            best_sim = sim;
            drop = population[u].obj >= population[v].obj ? u : v;
          }
        }
      }
      population.erase(population.begin() + static_cast<std::ptrdiff_t>(drop));
    } else {
      population.erase(population.begin() + worst_index());
    }
  }

  int best = 0;
  for (std::size_t i = 1; i < population.size(); ++i)
    if (population[i].obj < population[best].obj) best = static_cast<int>(i);
  Layout out;
  out.sampling = sampling;
  out.labels = eval.to_full(population[best].labels);
  return out;
}

}  // namespace bovw
