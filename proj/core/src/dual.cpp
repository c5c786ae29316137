#include "csort/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "csort/errors.hpp"

namespace csort {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Slack for treating floating-point noise in forced (lower == upper) beta
// bounds as feasible.
double slack(double v) { return 1e-9 * (1.0 + std::abs(v)); }

}  // namespace

SubpairForest build_subpair_forest(const Assignment& assignment) {
  SubpairForest forest;
  for (const auto& p : assignment.pairs) {
    if (!p.diagonal() && p.mass > 0) forest.nodes.push_back({p, {}});
  }
  std::vector<std::size_t> order(forest.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const AssignedPair& pa = forest.nodes[a].pair;
    const AssignedPair& pb = forest.nodes[b].pair;
    if (pa.lo() != pb.lo()) return pa.lo() < pb.lo();
    return pa.hi() > pb.hi();
  });

  std::vector<std::size_t> open;
  for (std::size_t id : order) {
    const AssignedPair& q = forest.nodes[id].pair;
    while (!open.empty()) {
      const AssignedPair& top = forest.nodes[open.back()].pair;
      if (top.hi() >= q.hi()) break;
      if (top.hi() > q.lo()) {
        std::ostringstream msg;
        msg << "pairs (" << top.x << "," << top.z << ") and (" << q.x << "," << q.z
            << ") intersect";
        throw InvalidAssignment(msg.str());
      }
      open.pop_back();
    }
    if (open.empty()) {
      forest.roots.push_back(id);
    } else {
      forest.nodes[open.back()].children.push_back(id);
    }
    open.push_back(id);
  }

  // Iterative post-order: children left to right, then the parent.
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t r : forest.roots) {
    stack.emplace_back(r, 0);
    while (!stack.empty()) {
      auto& [node, next_child] = stack.back();
      const auto& children = forest.nodes[node].children;
      if (next_child < children.size()) {
        const std::size_t child = children[next_child++];
        stack.emplace_back(child, 0);
      } else {
        forest.post_order.push_back(node);
        stack.pop_back();
      }
    }
  }
  return forest;
}

BetaSystem::BetaSystem(const std::vector<AssignedPair>& subpairs,
                       const std::optional<AssignedPair>& enclosing, const MismatchCost& cost)
    : p_(subpairs.size()), lower_(p_ * p_, kNegInf), upper_(p_ * p_, -kNegInf) {
  const auto c = [&](std::size_t i, std::size_t j) {
    return cost(subpairs[i - 1].x, subpairs[j - 1].z);
  };
  double c00 = 0.0;
  std::vector<double> c0(p_ + 1), cj0(p_ + 1);
  if (enclosing) {
    c00 = cost(enclosing->x, enclosing->z);
    for (std::size_t j = 1; j <= p_; ++j) {
      c0[j] = cost(enclosing->x, subpairs[j - 1].z);
      cj0[j] = cost(subpairs[j - 1].x, enclosing->z);
    }
  }
  for (std::size_t n = 1; n <= p_; ++n) {
    for (std::size_t m = n + 1; m <= p_; ++m) {
      double lo = -c(m, n);
      double hi = c(n, m);
      if (enclosing) {
        lo = std::max(c00 - c0[n] - cj0[m], lo);
        hi = std::min(c0[m] + cj0[n] - c00, hi);
      }
      lower_[idx(n, m)] = lo + c(n, n);
      upper_[idx(n, m)] = hi - c(m, m);
    }
  }
}

double BetaSystem::lower(std::size_t n, std::size_t m) const {
  if (!(1 <= n && n < m && m <= p_)) throw DomainError("beta bound index out of range");
  return lower_[idx(n, m)];
}

double BetaSystem::upper(std::size_t n, std::size_t m) const {
  if (!(1 <= n && n < m && m <= p_)) throw DomainError("beta bound index out of range");
  return upper_[idx(n, m)];
}

void BetaSystem::solve() {
  // Longest paths from node 1 with S_m >= S_n + lower(n,m) and
  // S_n >= S_m - upper(n,m). S_1 stays pinned at zero.
  std::vector<double> dist(p_ + 1, kNegInf);
  if (p_ == 0) {
    prefix_.assign(1, 0.0);
    return;
  }
  dist[1] = 0.0;
  bool changed = true;
  for (std::size_t round = 0; round <= p_ && changed; ++round) {
    changed = false;
    for (std::size_t n = 1; n <= p_; ++n) {
      for (std::size_t m = n + 1; m <= p_; ++m) {
        if (dist[n] != kNegInf) {
          const double cand = dist[n] + lower_[idx(n, m)];
          if (cand > dist[m] + (dist[m] == kNegInf ? 0.0 : 1e-13 * (1.0 + std::abs(cand)))) {
            dist[m] = cand;
            changed = true;
          }
        }
        if (n != 1 && dist[m] != kNegInf) {
          const double cand = dist[m] - upper_[idx(n, m)];
          if (cand > dist[n] + (dist[n] == kNegInf ? 0.0 : 1e-13 * (1.0 + std::abs(cand)))) {
            dist[n] = cand;
            changed = true;
          }
        }
      }
    }
  }
  prefix_.assign(dist.begin(), dist.end());
  const double worst = max_violation();
  if (changed || worst > 1e-8) {
    std::ostringstream msg;
    msg << "beta system with " << p_ << " subpairs is infeasible (violation " << worst
        << "); the assignment is not optimal";
    prefix_.clear();
    throw InternalInvariantViolation(msg.str());
  }
}

double BetaSystem::prefix(std::size_t m) const {
  if (!solved()) throw DomainError("beta system not solved");
  if (m < 1 || m > p_) throw DomainError("prefix index out of range");
  return prefix_[m];
}

double BetaSystem::beta(std::size_t k) const {
  if (k < 2 || k > p_) throw DomainError("beta index out of range");
  return prefix(k) - prefix(k - 1);
}

double BetaSystem::max_violation() const {
  double worst = 0.0;
  for (std::size_t n = 1; n <= p_; ++n) {
    for (std::size_t m = n + 1; m <= p_; ++m) {
      const double sum = prefix_[m] - prefix_[n];
      const double lo = lower_[idx(n, m)];
      const double hi = upper_[idx(n, m)];
      worst = std::max(worst, (lo - sum) / (1.0 + std::abs(lo)));
      worst = std::max(worst, (sum - hi) / (1.0 + std::abs(hi)));
    }
  }
  return worst;
}

namespace {

struct NodeFrame {
  double phi_x = 0.0;
  double phi_z = 0.0;
  std::vector<double> child_offsets;
};

// Offsets that place each subpair's local potential into the enclosing frame:
// phi(s) = phi_i(s) + (S_p - S_i) + phi_p(x_p) - phi_i(x_i).
std::vector<double> subpair_offsets(const std::vector<AssignedPair>& subpairs,
                                    const std::vector<const NodeFrame*>& frames,
                                    const std::optional<AssignedPair>& enclosing,
                                    const MismatchCost& cost) {
  const std::size_t p = subpairs.size();
  std::vector<double> offsets(p, 0.0);
  if (p <= 1) return offsets;
  BetaSystem system(subpairs, enclosing, cost);
  system.solve();
  const double anchor = frames[p - 1]->phi_x;
  for (std::size_t i = 1; i <= p; ++i) {
    offsets[i - 1] = system.prefix(p) - system.prefix(i) + anchor - frames[i - 1]->phi_x;
  }
  return offsets;
}

}  // namespace

LocalPotentials local_potentials(const SubpairForest& forest, const MismatchCost& cost) {
  LocalPotentials out;
  {
    std::set<double> workers, jobs;
    for (const auto& node : forest.nodes) {
      workers.insert(node.pair.x);
      jobs.insert(node.pair.z);
    }
    for (double s : workers) {
      if (jobs.count(s)) {
        throw InvalidAssignment("skill " + std::to_string(s) +
                                " is both a mismatched worker and a mismatched job; "
                                "perfect pairs are not maximal");
      }
    }
    out.worker_skills.assign(workers.begin(), workers.end());
    out.job_skills.assign(jobs.begin(), jobs.end());
  }

  std::vector<NodeFrame> frames(forest.nodes.size());
  for (std::size_t id : forest.post_order) {
    const auto& node = forest.nodes[id];
    NodeFrame& frame = frames[id];
    const AssignedPair& outer = node.pair;
    const double c00 = cost(outer.x, outer.z);
    if (node.children.empty()) {
      frame.phi_z = 0.0;
      frame.phi_x = c00;
      continue;
    }
    std::vector<AssignedPair> subpairs;
    std::vector<const NodeFrame*> child_frames;
    for (std::size_t child : node.children) {
      subpairs.push_back(forest.nodes[child].pair);
      child_frames.push_back(&frames[child]);
    }
    frame.child_offsets = subpair_offsets(subpairs, child_frames, outer, cost);

    bool shares_worker = false;
    for (const auto& sp : subpairs) shares_worker = shares_worker || sp.x == outer.x;
    if (shares_worker) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < subpairs.size(); ++i) {
        const double phi_zi = child_frames[i]->phi_z + frame.child_offsets[i];
        best = std::min(best, phi_zi + cost(outer.x, subpairs[i].z));
      }
      frame.phi_z = best - c00;
    } else {
      double best = kNegInf;
      for (std::size_t i = 0; i < subpairs.size(); ++i) {
        const double phi_xi = child_frames[i]->phi_x + frame.child_offsets[i];
        best = std::max(best, phi_xi - cost(subpairs[i].x, outer.z));
      }
      frame.phi_z = best;
    }
    frame.phi_x = frame.phi_z + c00;
  }

  std::vector<AssignedPair> root_pairs;
  std::vector<const NodeFrame*> root_frames;
  for (std::size_t r : forest.roots) {
    root_pairs.push_back(forest.nodes[r].pair);
    root_frames.push_back(&frames[r]);
  }
  const std::vector<double> root_offsets =
      subpair_offsets(root_pairs, root_frames, std::nullopt, cost);

  const auto record = [&](double skill, double value) {
    auto [it, inserted] = out.phi.emplace(skill, value);
    if (!inserted && std::abs(it->second - value) > slack(value)) {
      std::ostringstream msg;
      msg << "inconsistent potential at shared skill " << skill << ": " << it->second
          << " vs " << value;
      throw InternalInvariantViolation(msg.str());
    }
  };
  std::vector<std::pair<std::size_t, double>> stack;
  for (std::size_t r = 0; r < forest.roots.size(); ++r) {
    stack.emplace_back(forest.roots[r], root_offsets[r]);
  }
  while (!stack.empty()) {
    const auto [id, offset] = stack.back();
    stack.pop_back();
    const auto& node = forest.nodes[id];
    record(node.pair.x, frames[id].phi_x + offset);
    record(node.pair.z, frames[id].phi_z + offset);
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      stack.emplace_back(node.children[i], offset + frames[id].child_offsets[i]);
    }
  }
  return out;
}

const DualPoint* DualSolution::find(double skill) const {
  auto it = std::lower_bound(points.begin(), points.end(), skill,
                             [](const DualPoint& p, double s) { return p.skill < s; });
  return (it != points.end() && it->skill == skill) ? &*it : nullptr;
}

const DualPoint& DualSolution::at(double skill) const {
  if (const DualPoint* p = find(skill)) return *p;
  throw DomainError("no dual value at skill " + std::to_string(skill));
}

DualSolution extend_duals(const LocalPotentials& local, const Assignment& assignment,
                          const ProductionSpec& spec) {
  const MismatchCost& c = spec.cost;
  const std::vector<double>& I = local.worker_skills;
  const std::vector<double>& J = local.job_skills;
  std::vector<double> IJ = I;
  IJ.insert(IJ.end(), J.begin(), J.end());
  std::sort(IJ.begin(), IJ.end());

  std::set<double> all;
  for (const auto& p : assignment.pairs) {
    all.insert(p.x);
    all.insert(p.z);
  }

  std::map<double, double> phi, psi;
  if (!IJ.empty()) {
    // Double c-transform of the local potential on I.
    std::map<double, double> phi_t;
    for (double x : I) phi_t[x] = local.phi.at(x);
    std::map<double, double> phi_c;
    for (double z : J) {
      double best = std::numeric_limits<double>::infinity();
      for (double x : I) best = std::min(best, c(x, z) - phi_t[x]);
      phi_c[z] = best;
    }
    for (double x : I) {
      double best = std::numeric_limits<double>::infinity();
      for (double z : J) best = std::min(best, c(x, z) - phi_c[z]);
      phi_t[x] = best;
    }

    std::map<double, double> psi_t;
    for (double z : IJ) {
      double best = std::numeric_limits<double>::infinity();
      for (double x : I) best = std::min(best, c(x, z) - phi_t[x]);
      psi_t[z] = best;
    }
    std::map<double, double> phi_h;
    for (double x : IJ) {
      double best = std::numeric_limits<double>::infinity();
      for (double z : IJ) best = std::min(best, c(x, z) - psi_t[z]);
      phi_h[x] = best;
    }
    for (double z : J) {
      double best = std::numeric_limits<double>::infinity();
      for (double x : IJ) best = std::min(best, c(x, z) - phi_h[x]);
      psi[z] = best;
      phi[z] = -best;
    }
    for (double x : I) {
      phi[x] = phi_h[x];
      psi[x] = -phi_h[x];
    }
    for (double s : all) {
      if (phi.count(s)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (double z : IJ) best = std::min(best, c(s, z) - psi[z]);
      phi[s] = best;
      psi[s] = -best;
    }
  } else {
    for (double s : all) {
      phi[s] = 0.0;
      psi[s] = 0.0;
    }
  }

  DualSolution out;
  out.points.reserve(all.size());
  for (double s : all) {
    const double f = phi.at(s);
    const double g = psi.at(s);
    out.points.push_back({s, f, g, spec.g(s) - f, spec.h(s) - g});
  }
  return out;
}

DualReport construct_duals(const Assignment& assignment, const ProductionSpec& spec) {
  DualReport report;
  report.forest = build_subpair_forest(assignment);
  report.local = local_potentials(report.forest, spec.cost);
  report.dual = extend_duals(report.local, assignment, spec);

  const double scale = static_cast<double>(assignment.scale);
  double primal = 0.0;
  double dual = 0.0;
  for (const auto& p : assignment.pairs) {
    const double m = static_cast<double>(p.mass) / scale;
    primal += m * effective_output(spec, p.x, p.z);
    dual += m * (report.dual.at(p.x).w + report.dual.at(p.z).v);
  }
  report.primal_value = primal;
  report.dual_value = dual;
  report.gap = std::abs(dual - primal) / std::max(1.0, std::abs(primal));
  return report;
}

}  // namespace csort
