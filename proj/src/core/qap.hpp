#pragma once

#include <cstdint>
#include <vector>

#include "costs.hpp"

namespace bovw {

// Assignment of word labels to grid cells (row-major). Instances of the same
// word are interchangeable, so the label grid is the canonical representation
// of the underlying permutation.
struct Layout {
  SamplingSpec sampling;
  std::vector<int> labels;

  bool operator==(const Layout&) const = default;
};

struct SolverConfig {
  double lambda = 0.8;
  int population = 100;        // N_P
  double replace_prob = 0.2;   // p
  std::uint64_t seed = 0;
  int max_generations = 10000;
  double convergence_eps = 1e-9;
  double sa_initial_temp = 1.0;
  double sa_decay = 0.999;
  long sa_iterations = 200000;

  void validate() const;
};

// (1-lambda) * sum of adjacency costs over ordered neighbor pairs
// + lambda * sum of position costs. Pairs reaching outside the grid
// contribute nothing.
double objective(const Layout& layout, const AdjacencyCost& ca, const PositionCost& cp,
                 double lambda);

// Coefficient of x_ik * x_jl in the quadratic form equivalent to the
// objective: (1-lambda) * C^a(i,j,d(k,l)) + (lambda/N) * C^p(i,k), where the
// adjacency term is zero when d(k,l) is outside the offset set.
double lawler_coefficient(int word_i, int word_j, int place_k, int place_l,
                          const AdjacencyCost& ca, const PositionCost& cp, double lambda,
                          int grid_w, int grid_h);

// objective(after swapping cell_a/cell_b) - objective(before), computed in
// O(m) by touching only the two cells' cost rows and offset neighborhoods.
double swap_delta(const Layout& layout, int cell_a, int cell_b, const AdjacencyCost& ca,
                  const PositionCost& cp, double lambda);

// Uniformly random placement of the histogram's word instances (seeded
// Fisher-Yates).
Layout random_layout(const BovwHistogram& hist, const SamplingSpec& sampling,
                     std::uint64_t seed);

// Best-improvement 2-swap descent: repeatedly applies the single best
// improving swap (ties to the lexicographically smallest cell pair) until no
// swap improves by more than eps. max_moves < 0 means unlimited.
Layout hill_climb(const Layout& layout, const AdjacencyCost& ca, const PositionCost& cp,
                  double lambda, double eps = 1e-9, long max_moves = -1);

// Random-swap annealing with acceptance min(1, exp(-delta/T)) and a geometric
// temperature schedule; returns the best layout visited.
Layout simulated_annealing(const BovwHistogram& hist, const SamplingSpec& sampling,
                           const AdjacencyCost& ca, const PositionCost& cp,
                           const SolverConfig& config);

// Exhaustive scan of all distinct label arrangements (multiset permutations).
// Refuses instances with more than 10^7 arrangements. Ties resolve to the
// lexicographically smallest label grid.
Layout brute_force_solve(const BovwHistogram& hist, const SamplingSpec& sampling,
                         const AdjacencyCost& ca, const PositionCost& cp, double lambda);

// Cells where the parents agree are copied; the remaining word instances are
// placed greedily (random unfilled cell, cheapest available label against the
// already-fixed neighbors plus position cost).
Layout crossover(const Layout& parent_a, const Layout& parent_b, const AdjacencyCost& ca,
                 const PositionCost& cp, double lambda, Rng& rng);

// Number of cells with equal labels.
int similarity(const Layout& a, const Layout& b);

// Population method: hill-climbed random layouts, crossover, child hill
// climbing, diversity-aware replacement; stops when the population's best and
// worst objectives are within convergence_eps or after max_generations.
Layout ga_hc_solve(const BovwHistogram& hist, const SamplingSpec& sampling,
                   const AdjacencyCost& ca, const PositionCost& cp,
                   const SolverConfig& config);

}  // namespace bovw
