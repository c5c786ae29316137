#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "csort/cost.hpp"
#include "csort/distributions.hpp"
#include "csort/dual.hpp"
#include "csort/solver.hpp"

namespace csort {

// One entry per unit of integer mass, both lists sorted and of equal length.
struct UnitInstance {
  std::vector<double> workers;
  std::vector<double> jobs;

  std::size_t size() const { return workers.size(); }
};

// Expands both distributions at their common scale. Throws MassMismatch, or
// InstanceTooLarge when a side would exceed max_units entries.
UnitInstance to_unit_instance(const DiscreteDistribution& workers,
                              const DiscreteDistribution& jobs, std::size_t max_units = 200);

enum class OracleMode { kExhaustive, kMatching };

inline constexpr std::size_t kExhaustiveLimit = 8;
inline constexpr std::size_t kMatchingLimit = 200;

struct OracleResult {
  double cost = 0.0;  // sum over units, not divided by any scale
  // pairing[i] is the index in jobs matched to workers[i].
  std::vector<std::size_t> pairing;
};

// Exhaustive permutation search (up to 8 units) or Hungarian min-cost perfect
// matching (up to 200 units). Throws InstanceTooLarge beyond those limits.
OracleResult brute_force_min_cost(const UnitInstance& inst, const MismatchCost& cost,
                                  OracleMode mode);

// Optimal cost in true mass units: exhaustive when it fits, matching otherwise.
double oracle_min_cost(const DiscreteDistribution& workers, const DiscreteDistribution& jobs,
                       const MismatchCost& cost);

struct AssignmentCheck {
  bool marginal_mismatch = false;
  bool intersecting_pairs = false;
  bool submaximal_diagonal = false;
  bool cost_mismatch = false;
  std::vector<std::string> messages;

  bool ok() const {
    return !marginal_mismatch && !intersecting_pairs && !submaximal_diagonal && !cost_mismatch;
  }
};

// Marginals equal F and G, no two pairs partially overlap, every skill carries
// min(F, G) on the diagonal, and total_cost matches a fresh recomputation
// within 1e-9 relative.
AssignmentCheck check_assignment(const Assignment& assignment, const DiscreteDistribution& workers,
                                 const DiscreteDistribution& jobs, const MismatchCost& cost);

struct DualityCheck {
  bool infeasible = false;     // some w(x) + v(z) < y(x, z) - tolerance
  bool slack_on_support = false;
  bool gap_exceeded = false;
  double worst_feasibility = 0.0;  // max of y - w - v over S x S
  double worst_slackness = 0.0;    // max |w + v - y| over the support
  double gap = 0.0;
  std::vector<std::string> messages;

  bool ok() const { return !infeasible && !slack_on_support && !gap_exceeded; }
};

DualityCheck check_duality(const DualSolution& dual, const Assignment& assignment,
                           const ProductionSpec& spec, double tolerance = 1e-9);

struct RandomInstanceOptions {
  std::size_t min_units = 2;
  std::size_t max_units = 12;
  double zeta_min = 0.3;
  double zeta_max = 0.95;
  double rho_min = 0.5;
  double rho_max = 2.0;
};

struct RandomInstance {
  DiscreteDistribution workers;
  DiscreteDistribution jobs;
  PowerCostParams params;
};

// Unit-mass instance of random size whose skills sit on a coarse random grid,
// so that shared skills, repeated atoms and cost ties all occur regularly.
RandomInstance random_instance(std::mt19937_64& rng, const RandomInstanceOptions& options = {});

// g(x) = x and h(z) = z over the span of both supports.
ProductionSpec identity_production(const DiscreteDistribution& workers,
                                   const DiscreteDistribution& jobs, MismatchCost cost);

struct TrialOutcome {
  double solver_cost = 0.0;
  double oracle_cost = 0.0;
  bool cost_ok = false;
  AssignmentCheck assignment;
  DualityCheck duality;
  std::string error;  // message of an exception thrown along the pipeline

  bool ok() const { return error.empty() && cost_ok && assignment.ok() && duality.ok(); }
};

// Solve, oracle, assignment check and dual certification for one instance.
TrialOutcome run_trial(const DiscreteDistribution& workers, const DiscreteDistribution& jobs,
                       const MismatchCost& cost, BellmanMethod method = BellmanMethod::kEfficient);

}  // namespace csort
