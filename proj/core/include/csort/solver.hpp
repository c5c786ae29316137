#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "csort/cost.hpp"
#include "csort/distributions.hpp"
#include "csort/layering.hpp"

namespace csort {

struct AssignedPair {
  double x = 0.0;  // worker skill
  double z = 0.0;  // job skill
  std::int64_t mass = 0;

  double lo() const { return x < z ? x : z; }
  double hi() const { return x < z ? z : x; }
  bool diagonal() const { return x == z; }

  friend bool operator==(const AssignedPair&, const AssignedPair&) = default;
};

// Two pairs intersect when their intervals partially overlap: one starts
// strictly inside the other and ends strictly outside it. Shared endpoints,
// nesting and disjointness are all allowed.
bool pairs_intersect(const AssignedPair& a, const AssignedPair& b);

// Sparse coupling: pairs are unique by (x, z), sorted, with positive integer
// masses over `scale`.
struct Assignment {
  std::vector<AssignedPair> pairs;
  double total_cost = 0.0;
  std::int64_t scale = 1;

  DiscreteDistribution worker_marginal() const;
  DiscreteDistribution job_marginal() const;
  std::int64_t diagonal_mass() const;
  std::int64_t total_mass() const;
};

// Merges duplicate (x, z) entries, sorts, and sets total_cost = sum mass *
// c(x, z) / scale.
Assignment make_assignment(std::vector<AssignedPair> pairs, std::int64_t scale,
                           const MismatchCost& cost);

// Minimal within-layer cost V(i, j) over the points s_i..s_j (0-based,
// inclusive), defined when j - i is odd, with the empty range V(i, i-1) = 0.
class ValueTable {
 public:
  ValueTable() = default;
  explicit ValueTable(std::size_t points, bool with_argmin);

  std::size_t points() const { return points_; }
  double value(std::size_t i, std::ptrdiff_t j) const;
  void set_value(std::size_t i, std::size_t j, double v);
  bool has_argmin() const { return !argmin_.empty(); }
  std::size_t argmin(std::size_t i, std::size_t j) const;
  void set_argmin(std::size_t i, std::size_t j, std::size_t k);

  // V over the whole layer; 0 for an empty layer.
  double full() const;

 private:
  std::size_t index(std::size_t i, std::ptrdiff_t j) const;

  std::size_t points_ = 0;
  std::vector<double> values_;
  std::vector<std::uint32_t> argmin_;
};

enum class BellmanMethod { kSimple, kEfficient };

struct LayerSolution {
  // Index pairs (worker index, job index) into layer.points.
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  ValueTable values;
  // Pairs carrying layer.mass each, over the caller's scale.
  Assignment assignment;
};

// Optimal alternating assignment of one layer by Bellman recursion.
//   kSimple:    V(i,j) = min_k c(s_i, s_k) + V(i+1, k-1) + V(k+1, j), argmin kept.
//   kEfficient: V(i,j) = min(c(s_i, s_j) + V(i+1, j-1),
//                            V(i, j-2) + V(i+2, j) - V(i+2, j-2)).
// Backtracking pairs s_i with the smallest k attaining the minimum. Throws
// PreconditionViolated for a non-alternating layer.
LayerSolution solve_layer(const Layer& layer, const MismatchCost& cost,
                          BellmanMethod method, std::int64_t scale = 1);

struct SolveOptions {
  BellmanMethod method = BellmanMethod::kEfficient;
  // Worker threads for per-layer solves; 0 means hardware concurrency.
  unsigned threads = 1;
};

struct SolveReport {
  CommonSplit split;
  std::vector<Layer> layers;
  std::vector<LayerSolution> layer_solutions;
  Assignment assignment;
};

// Perfect pairs on the common component plus the optimal assignment of every
// layer of the remainders. Throws MassMismatch on unequal total mass.
SolveReport solve_detailed(const DiscreteDistribution& workers,
                           const DiscreteDistribution& jobs, const MismatchCost& cost,
                           const SolveOptions& options = {});
Assignment solve(const DiscreteDistribution& workers, const DiscreteDistribution& jobs,
                 const MismatchCost& cost, const SolveOptions& options = {});

// Smallest zeta (bisection to 1e-6) above which the layered positive
// assignment is optimal for the symmetric cost |x - z|^zeta, checked over the
// pairwise distances realized by the supports of the mismatched remainders.
// Returns 0 when the condition is vacuous.
double zeta_threshold(const DiscreteDistribution& workers, const DiscreteDistribution& jobs);

// Within every layer, the k-th worker goes to the k-th job in skill order.
Assignment layered_positive(const DiscreteDistribution& workers,
                            const DiscreteDistribution& jobs, const MismatchCost& cost);

// Quantile coupling of the full distributions (positive assortative matching).
Assignment positive_sorting_convex(const DiscreteDistribution& workers,
                                   const DiscreteDistribution& jobs,
                                   const MismatchCost& cost);

}  // namespace csort
