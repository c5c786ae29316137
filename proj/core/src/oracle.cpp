#include "csort/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "csort/errors.hpp"

namespace csort {

namespace {

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

double pairing_cost(const UnitInstance& inst, const MismatchCost& cost,
                    const std::vector<std::size_t>& pairing) {
  double total = 0.0;
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    total += cost(inst.workers[i], inst.jobs[pairing[i]]);
  }
  return total;
}

OracleResult exhaustive(const UnitInstance& inst, const MismatchCost& cost) {
  const std::size_t n = inst.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  OracleResult best{std::numeric_limits<double>::infinity(), perm};
  do {
    const double v = pairing_cost(inst, cost, perm);
    if (v < best.cost) best = {v, perm};
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (n == 0) best.cost = 0.0;
  return best;
}

// Shortest augmenting path Hungarian method with row/column potentials, O(n^3).
OracleResult hungarian(const UnitInstance& inst, const MismatchCost& cost) {
  const std::size_t n = inst.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = cost(inst.workers[i], inst.jobs[j]);
  }
  // 1-based rows and columns; column 0 is the virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  OracleResult out;
  out.pairing.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.pairing[match[j] - 1] = j - 1;
  out.cost = pairing_cost(inst, cost, out.pairing);
  return out;
}

}  // namespace

UnitInstance to_unit_instance(const DiscreteDistribution& workers,
                              const DiscreteDistribution& jobs, std::size_t max_units) {
  const ScaledPair p = to_common_scale(workers, jobs);
  if (static_cast<std::uint64_t>(p.workers.total_mass()) > max_units) {
    throw InstanceTooLarge("instance has " + std::to_string(p.workers.total_mass()) +
                           " units, limit is " + std::to_string(max_units));
  }
  UnitInstance inst;
  for (const Atom& a : p.workers.atoms()) inst.workers.insert(inst.workers.end(), a.mass, a.skill);
  for (const Atom& a : p.jobs.atoms()) inst.jobs.insert(inst.jobs.end(), a.mass, a.skill);
  return inst;
}

OracleResult brute_force_min_cost(const UnitInstance& inst, const MismatchCost& cost,
                                  OracleMode mode) {
  if (inst.workers.size() != inst.jobs.size()) {
    throw MassMismatch("unit instance sides differ in length");
  }
  const std::size_t limit = mode == OracleMode::kExhaustive ? kExhaustiveLimit : kMatchingLimit;
  if (inst.size() > limit) {
    throw InstanceTooLarge("instance of " + std::to_string(inst.size()) +
                           " units exceeds the " +
                           (mode == OracleMode::kExhaustive ? "exhaustive" : "matching") +
                           " limit of " + std::to_string(limit));
  }
  return mode == OracleMode::kExhaustive ? exhaustive(inst, cost) : hungarian(inst, cost);
}

double oracle_min_cost(const DiscreteDistribution& workers, const DiscreteDistribution& jobs,
                       const MismatchCost& cost) {
  const UnitInstance inst = to_unit_instance(workers, jobs, kMatchingLimit);
  const OracleMode mode =
      inst.size() <= kExhaustiveLimit ? OracleMode::kExhaustive : OracleMode::kMatching;
  const double scale = static_cast<double>(common_scale(workers, jobs));
  return brute_force_min_cost(inst, cost, mode).cost / scale;
}

AssignmentCheck check_assignment(const Assignment& assignment, const DiscreteDistribution& workers,
                                 const DiscreteDistribution& jobs, const MismatchCost& cost) {
  AssignmentCheck report;
  const auto flag = [&](bool& field, const std::string& message) {
    field = true;
    report.messages.push_back(message);
  };

  try {
    const ScaledPair fw = to_common_scale(assignment.worker_marginal(), workers);
    const ScaledPair gj = to_common_scale(assignment.job_marginal(), jobs);
    if (!(fw.workers == fw.jobs)) flag(report.marginal_mismatch, "worker marginal differs from F");
    if (!(gj.workers == gj.jobs)) flag(report.marginal_mismatch, "job marginal differs from G");
  } catch (const MassMismatch& e) {
    flag(report.marginal_mismatch, std::string("marginal mass differs: ") + e.what());
  }

  for (std::size_t a = 0; a < assignment.pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < assignment.pairs.size(); ++b) {
      if (pairs_intersect(assignment.pairs[a], assignment.pairs[b])) {
        std::ostringstream msg;
        const auto& p = assignment.pairs[a];
        const auto& q = assignment.pairs[b];
        msg << "pairs (" << p.x << "," << p.z << ") and (" << q.x << "," << q.z << ") intersect";
        flag(report.intersecting_pairs, msg.str());
      }
    }
  }

  // Diagonal mass at each skill against min(F, G), compared at a shared scale.
  const std::int64_t fg_scale = std::lcm(workers.scale(), jobs.scale());
  const std::int64_t scale = std::lcm(fg_scale, assignment.scale);
  const std::int64_t a_factor = scale / assignment.scale;
  const std::int64_t f_factor = scale / workers.scale();
  const std::int64_t g_factor = scale / jobs.scale();
  std::set<double> skills;
  for (const Atom& a : workers.atoms()) skills.insert(a.skill);
  for (const Atom& a : jobs.atoms()) skills.insert(a.skill);
  for (double s : skills) {
    std::int64_t diag = 0;
    for (const auto& p : assignment.pairs) {
      if (p.diagonal() && p.x == s) diag += p.mass;
    }
    const std::int64_t available =
        std::min(workers.mass_at(s) * f_factor, jobs.mass_at(s) * g_factor);
    if (diag * a_factor < available) {
      std::ostringstream msg;
      msg << "diagonal mass at " << s << " is " << diag << "/" << assignment.scale
          << ", common mass available is " << available << "/" << scale;
      flag(report.submaximal_diagonal, msg.str());
    }
  }

  double total = 0.0;
  for (const auto& p : assignment.pairs) total += static_cast<double>(p.mass) * cost(p.x, p.z);
  total /= static_cast<double>(assignment.scale);
  if (!close(total, assignment.total_cost, 1e-9)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "reported cost " << assignment.total_cost << " but pairs cost " << total;
    flag(report.cost_mismatch, msg.str());
  }
  return report;
}

DualityCheck check_duality(const DualSolution& dual, const Assignment& assignment,
                           const ProductionSpec& spec, double tolerance) {
  DualityCheck report;
  std::ostringstream msg;
  msg.precision(17);

  double worst_x = 0.0, worst_z = 0.0;
  for (const DualPoint& x : dual.points) {
    for (const DualPoint& z : dual.points) {
      const double shortfall = effective_output(spec, x.skill, z.skill) - x.w - z.v;
      if (shortfall > report.worst_feasibility) {
        report.worst_feasibility = shortfall;
        worst_x = x.skill;
        worst_z = z.skill;
      }
    }
  }
  if (report.worst_feasibility > tolerance) {
    report.infeasible = true;
    msg << "w(" << worst_x << ") + v(" << worst_z << ") falls short of y by "
        << report.worst_feasibility;
    report.messages.push_back(msg.str());
    msg.str("");
  }

  const double scale = static_cast<double>(assignment.scale);
  double primal = 0.0, dual_value = 0.0;
  bool missing = false;
  for (const auto& p : assignment.pairs) {
    const DualPoint* x = dual.find(p.x);
    const DualPoint* z = dual.find(p.z);
    if (!x || !z) {
      missing = true;
      msg << "no dual value for pair (" << p.x << "," << p.z << ")";
      report.messages.push_back(msg.str());
      msg.str("");
      continue;
    }
    const double y = effective_output(spec, p.x, p.z);
    const double slack = std::abs(x->w + z->v - y);
    if (slack > report.worst_slackness) {
      report.worst_slackness = slack;
      worst_x = p.x;
      worst_z = p.z;
    }
    const double m = static_cast<double>(p.mass) / scale;
    primal += m * y;
    dual_value += m * (x->w + z->v);
  }
  if (missing || report.worst_slackness > tolerance) {
    report.slack_on_support = true;
    if (!missing) {
      msg << "pair (" << worst_x << "," << worst_z << ") has slack " << report.worst_slackness;
      report.messages.push_back(msg.str());
      msg.str("");
    }
  }
  report.gap = std::abs(dual_value - primal) / std::max(1.0, std::abs(primal));
  if (report.gap > tolerance) {
    report.gap_exceeded = true;
    msg << "primal-dual gap " << report.gap;
    report.messages.push_back(msg.str());
  }
  return report;
}

RandomInstance random_instance(std::mt19937_64& rng, const RandomInstanceOptions& options) {
  std::uniform_int_distribution<std::size_t> size_dist(options.min_units, options.max_units);
  const std::size_t n = size_dist(rng);
  // A grid of roughly 2n slots keeps common atoms frequent without making
  // every instance trivial.
  std::uniform_int_distribution<int> slots(2, static_cast<int>(2 * n + 2));
  const int grid = slots(rng);
  std::uniform_real_distribution<double> spacing_dist(0.25, 3.0);
  const double spacing = spacing_dist(rng);
  std::uniform_int_distribution<int> cell(0, grid - 1);

  std::vector<Atom> workers, jobs;
  for (std::size_t i = 0; i < n; ++i) {
    workers.push_back({cell(rng) * spacing, 1});
    jobs.push_back({cell(rng) * spacing, 1});
  }
  std::uniform_real_distribution<double> zeta(options.zeta_min, options.zeta_max);
  std::uniform_real_distribution<double> rho(options.rho_min, options.rho_max);
  RandomInstance out;
  out.workers = DiscreteDistribution(std::move(workers));
  out.jobs = DiscreteDistribution(std::move(jobs));
  out.params.zeta_p = zeta(rng);
  out.params.rho_p = rho(rng);
  out.params.zeta_k = zeta(rng);
  out.params.rho_k = rho(rng);
  return out;
}

ProductionSpec identity_production(const DiscreteDistribution& workers,
                                   const DiscreteDistribution& jobs, MismatchCost cost) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto* d : {&workers, &jobs}) {
    for (const Atom& a : d->atoms()) {
      lo = any ? std::min(lo, a.skill) : a.skill;
      hi = any ? std::max(hi, a.skill) : a.skill;
      any = true;
    }
  }
  return ProductionSpec{TabulatedFunction::identity(lo, hi), TabulatedFunction::identity(lo, hi),
                        std::move(cost)};
}

TrialOutcome run_trial(const DiscreteDistribution& workers, const DiscreteDistribution& jobs,
                       const MismatchCost& cost, BellmanMethod method) {
  TrialOutcome out;
  try {
    SolveOptions options;
    options.method = method;
    const Assignment assignment = solve(workers, jobs, cost, options);
    out.solver_cost = assignment.total_cost;
    out.oracle_cost = oracle_min_cost(workers, jobs, cost);
    out.cost_ok = close(out.solver_cost, out.oracle_cost, 1e-9);
    out.assignment = check_assignment(assignment, workers, jobs, cost);
    const ProductionSpec spec = identity_production(workers, jobs, cost);
    const DualReport dual = construct_duals(assignment, spec);
    out.duality = check_duality(dual.dual, assignment, spec);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace csort
