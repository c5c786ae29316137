#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "csort/cost.hpp"
#include "csort/solver.hpp"

namespace csort {

// Nesting forest over the off-diagonal pairs of an assignment. A node's
// children are its direct subpairs: the maximal pairs whose intervals lie
// inside its own, ordered left to right.
struct SubpairForest {
  struct Node {
    AssignedPair pair;
    std::vector<std::size_t> children;
  };

  std::vector<Node> nodes;
  std::vector<std::size_t> roots;       // maximal pairs, left to right
  std::vector<std::size_t> post_order;  // children before parents
};

// Throws InvalidAssignment when two pairs intersect.
SubpairForest build_subpair_forest(const Assignment& assignment);

// Interval constraints on partial sums of the level shifts between the ordered
// subpairs (x_1, z_1) .. (x_p, z_p) of an enclosing pair (x_0, z_0):
//   lower(n, m) <= beta_{n+1} + ... + beta_m <= upper(n, m),  1 <= n < m <= p,
// with c_ij = c(x_i, z_j) and
//   lower = max(c_00 - c_0n - c_m0, -c_mn) + c_nn,
//   upper = min(c_0m + c_n0 - c_00, c_nm) - c_mm.
// Without an enclosing pair only the -c_mn and c_nm branches remain.
class BetaSystem {
 public:
  BetaSystem(const std::vector<AssignedPair>& subpairs,
             const std::optional<AssignedPair>& enclosing, const MismatchCost& cost);

  std::size_t size() const { return p_; }
  double lower(std::size_t n, std::size_t m) const;
  double upper(std::size_t n, std::size_t m) const;

  // Lexicographically smallest (beta_2, ..., beta_p). Solved as a longest-path
  // problem over prefix sums S_m = beta_2 + ... + beta_m (S_1 = 0), whose
  // distances from node 1 are simultaneously minimal. Throws
  // InternalInvariantViolation when the system is infeasible.
  void solve();
  bool solved() const { return !prefix_.empty(); }
  // beta_k for k in 2..p.
  double beta(std::size_t k) const;
  // S_m for m in 1..p.
  double prefix(std::size_t m) const;

  // Largest constraint violation of the current solution.
  double max_violation() const;

 private:
  std::size_t idx(std::size_t n, std::size_t m) const { return (n - 1) * p_ + (m - 1); }

  std::size_t p_ = 0;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> prefix_;
};

// Potential on the mismatched skills: phi(x) - phi(z) <= c(x, z) for every
// mismatched worker x and job z, with equality on every off-diagonal pair.
struct LocalPotentials {
  std::map<double, double> phi;
  std::vector<double> worker_skills;  // I
  std::vector<double> job_skills;     // J
};

// Processes the forest children-first. Leaves get phi(z_0) = 0 and
// phi(x_0) = c(x_0, z_0); an enclosing pair shifts the potentials of its
// subpairs by the lexicographically smallest beta solution and then sets its
// own endpoints. Maximal pairs are level-shifted the same way under a virtual
// enclosing pair that contributes no cost terms. Throws InvalidAssignment when
// a skill is both a mismatched worker and a mismatched job.
LocalPotentials local_potentials(const SubpairForest& forest, const MismatchCost& cost);

struct DualPoint {
  double skill = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  double w = 0.0;
  double v = 0.0;
};

// Dual potentials and wages/values on every skill of the economy, sorted by
// skill. psi = -phi everywhere, w = g - phi and v = h - psi.
struct DualSolution {
  std::vector<DualPoint> points;

  const DualPoint& at(double skill) const;
  const DualPoint* find(double skill) const;
};

// Extends mismatched potentials to the whole economy: double c-transform on I,
// then the sequential maps psi~ on I u J, phi^ on I u J, psi^ on J, and finally
// the perfectly paired skills K through phi(x) = min_{z in I u J} c(x, z) - psi(z).
DualSolution extend_duals(const LocalPotentials& local, const Assignment& assignment,
                          const ProductionSpec& spec);

struct DualReport {
  SubpairForest forest;
  LocalPotentials local;
  DualSolution dual;
  double primal_value = 0.0;  // sum y d(pi)
  double dual_value = 0.0;    // sum w dF + sum v dG
  double gap = 0.0;           // |dual - primal| / max(1, |primal|)
};

DualReport construct_duals(const Assignment& assignment, const ProductionSpec& spec);

}  // namespace csort
