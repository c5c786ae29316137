#pragma once

#include <string>
#include <vector>

#include "csort/cost.hpp"
#include "csort/distributions.hpp"
#include "csort/dual.hpp"
#include "csort/layering.hpp"
#include "csort/oracle.hpp"
#include "csort/quant.hpp"
#include "csort/solver.hpp"

// JSON text in and out. Objects keep a fixed key order and skill-keyed maps
// are sorted by skill, so equal inputs always produce byte-identical output.
namespace csort {

// {scale, pairs:[{x,z,mass,unit_cost}], total_cost}
std::string assignment_to_json(const Assignment& assignment, const MismatchCost& cost,
                               int indent = 2);
// Reads pairs and scale; total_cost is recomputed with `cost`. Throws ParseError.
Assignment assignment_from_json(const std::string& text, const MismatchCost& cost);

// [{mass, points:[{skill,side}], band:[lo,hi]}]
std::string layers_to_json(const std::vector<Layer>& layers, int indent = 2);

// {phi:{skill:value}, w:{...}, v:{...}, gap}
std::string dual_to_json(const DualSolution& dual, double gap, int indent = 2);
// Reads phi, w and v back; psi is set to -phi. Throws ParseError.
DualSolution dual_from_json(const std::string& text);

std::string dispersion_to_json(const DispersionReport& report, const std::string& label,
                               int indent = 2);

// Economy fixture:
//   {label, scale, workers:[{skill,mass}], jobs:[...],
//    cost:{zeta_p,rho_p,zeta_k,rho_k} | {B_p,eta_p,B_k,eta_k},
//    g:[[x,y],...], h:[[x,y],...]}
// Only workers and jobs are required. A missing cost is the symmetric square
// root; missing g and h fall back to default_production over the supports.
EconomyFixture economy_from_json(const std::string& text);
std::string economy_to_json(const DiscreteDistribution& workers, const DiscreteDistribution& jobs,
                            const PowerCostParams& params, const std::string& label,
                            int indent = 2);

std::string trial_to_json(const TrialOutcome& outcome, int indent = 2);

}  // namespace csort
