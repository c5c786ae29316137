#include "csort/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "csort/errors.hpp"

namespace csort {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack used to break near-ties toward the smallest k.
double tie_tolerance(double v) { return 1e-12 * (1.0 + std::abs(v)); }

double point_cost(const Layer& layer, const MismatchCost& cost, std::size_t a, std::size_t b) {
  const LayerPoint& p = layer.points[a];
  const LayerPoint& q = layer.points[b];
  return p.side == Side::kWorker ? cost(p.skill, q.skill) : cost(q.skill, p.skill);
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

bool pairs_intersect(const AssignedPair& a, const AssignedPair& b) {
  const double a_lo = a.lo(), a_hi = a.hi();
  const double b_lo = b.lo(), b_hi = b.hi();
  return (a_lo < b_lo && b_lo < a_hi && a_hi < b_hi) ||
         (b_lo < a_lo && a_lo < b_hi && b_hi < a_hi);
}

DiscreteDistribution Assignment::worker_marginal() const {
  std::vector<Atom> atoms;
  atoms.reserve(pairs.size());
  for (const auto& p : pairs) atoms.push_back({p.x, p.mass});
  return DiscreteDistribution(std::move(atoms), scale);
}

DiscreteDistribution Assignment::job_marginal() const {
  std::vector<Atom> atoms;
  atoms.reserve(pairs.size());
  for (const auto& p : pairs) atoms.push_back({p.z, p.mass});
  return DiscreteDistribution(std::move(atoms), scale);
}

std::int64_t Assignment::diagonal_mass() const {
  std::int64_t total = 0;
  for (const auto& p : pairs) {
    if (p.diagonal()) total += p.mass;
  }
  return total;
}

std::int64_t Assignment::total_mass() const {
  std::int64_t total = 0;
  for (const auto& p : pairs) total += p.mass;
  return total;
}

Assignment make_assignment(std::vector<AssignedPair> pairs, std::int64_t scale,
                           const MismatchCost& cost) {
  if (scale <= 0) throw DomainError("assignment scale must be positive");
  std::map<std::pair<double, double>, std::int64_t> merged;
  for (const auto& p : pairs) {
    if (p.mass < 0) throw DomainError("assignment pair mass must be non-negative");
    if (p.mass > 0) merged[{p.x, p.z}] += p.mass;
  }
  Assignment out;
  out.scale = scale;
  out.pairs.reserve(merged.size());
  double total = 0.0;
  for (const auto& [key, mass] : merged) {
    out.pairs.push_back({key.first, key.second, mass});
    total += static_cast<double>(mass) * cost(key.first, key.second);
  }
  out.total_cost = total / static_cast<double>(scale);
  return out;
}

ValueTable::ValueTable(std::size_t points, bool with_argmin)
    : points_(points), values_((points + 1) * (points + 1), kInf) {
  for (std::size_t i = 0; i <= points; ++i) values_[index(i, static_cast<std::ptrdiff_t>(i) - 1)] = 0.0;
  if (with_argmin) argmin_.assign((points + 1) * (points + 1), 0);
}

std::size_t ValueTable::index(std::size_t i, std::ptrdiff_t j) const {
  return i * (points_ + 1) + static_cast<std::size_t>(j + 1);
}

double ValueTable::value(std::size_t i, std::ptrdiff_t j) const {
  if (i > points_ || j < static_cast<std::ptrdiff_t>(i) - 1 ||
      j >= static_cast<std::ptrdiff_t>(points_)) {
    throw DomainError("value table index out of range");
  }
  return values_[index(i, j)];
}

void ValueTable::set_value(std::size_t i, std::size_t j, double v) {
  values_[index(i, static_cast<std::ptrdiff_t>(j))] = v;
}

std::size_t ValueTable::argmin(std::size_t i, std::size_t j) const {
  return argmin_.at(index(i, static_cast<std::ptrdiff_t>(j)));
}

void ValueTable::set_argmin(std::size_t i, std::size_t j, std::size_t k) {
  argmin_.at(index(i, static_cast<std::ptrdiff_t>(j))) = static_cast<std::uint32_t>(k);
}

double ValueTable::full() const {
  return points_ == 0 ? 0.0 : value(0, static_cast<std::ptrdiff_t>(points_) - 1);
}

LayerSolution solve_layer(const Layer& layer, const MismatchCost& cost, BellmanMethod method,
                          std::int64_t scale) {
  LayerSolution out;
  const std::size_t m = layer.points.size();
  if (m == 0) {
    out.assignment.scale = scale;
    return out;
  }
  if (!layer.alternates()) {
    throw PreconditionViolated("layer must alternate between workers and jobs");
  }
  if (layer.mass <= 0) throw PreconditionViolated("layer mass must be positive");

  ValueTable& V = out.values;
  V = ValueTable(m, method == BellmanMethod::kSimple);
  const auto c = [&](std::size_t a, std::size_t b) { return point_cost(layer, cost, a, b); };
  const auto sj = [](std::size_t j) { return static_cast<std::ptrdiff_t>(j); };

  for (std::size_t len = 2; len <= m; len += 2) {
    for (std::size_t i = 0; i + len <= m; ++i) {
      const std::size_t j = i + len - 1;
      if (method == BellmanMethod::kSimple) {
        double best = kInf;
        std::size_t best_k = i + 1;
        for (std::size_t k = i + 1; k <= j; k += 2) {
          const double v = c(i, k) + V.value(i + 1, sj(k) - 1) + V.value(k + 1, sj(j));
          if (k == i + 1 || v < best - tie_tolerance(best)) {
            best = v;
            best_k = k;
          }
        }
        V.set_value(i, j, best);
        V.set_argmin(i, j, best_k);
      } else if (len == 2) {
        V.set_value(i, j, c(i, j));
      } else {
        const double pair_ends = c(i, j) + V.value(i + 1, sj(j) - 1);
        const double split = V.value(i, sj(j) - 2) + V.value(i + 2, sj(j)) -
                             V.value(i + 2, sj(j) - 2);
        V.set_value(i, j, std::min(pair_ends, split));
      }
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, m - 1}};
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    std::size_t k = i + 1;
    if (V.has_argmin()) {
      k = V.argmin(i, j);
    } else {
      double best = kInf;
      for (std::size_t cand = i + 1; cand <= j; cand += 2) {
        const double v = c(i, cand) + V.value(i + 1, sj(cand) - 1) + V.value(cand + 1, sj(j));
        if (cand == i + 1 || v < best - tie_tolerance(best)) {
          best = v;
          k = cand;
        }
      }
    }
    if (layer.points[i].side == Side::kWorker) {
      out.matches.emplace_back(i, k);
    } else {
      out.matches.emplace_back(k, i);
    }
    if (k > i + 1) stack.emplace_back(i + 1, k - 1);
    if (k < j) stack.emplace_back(k + 1, j);
  }
  std::sort(out.matches.begin(), out.matches.end());

  std::vector<AssignedPair> pairs;
  pairs.reserve(out.matches.size());
  for (const auto& [w, jb] : out.matches) {
    pairs.push_back({layer.points[w].skill, layer.points[jb].skill, layer.mass});
  }
  out.assignment = make_assignment(std::move(pairs), scale, cost);
  return out;
}

SolveReport solve_detailed(const DiscreteDistribution& workers,
                           const DiscreteDistribution& jobs, const MismatchCost& cost,
                           const SolveOptions& options) {
  SolveReport report;
  report.split = common_component(workers, jobs);
  report.layers = decompose_layers(report.split.workers_rem, report.split.jobs_rem);
  const std::int64_t scale = report.split.common.scale();

  report.layer_solutions.resize(report.layers.size());
  parallel_for(report.layers.size(), options.threads, [&](std::size_t l) {
    report.layer_solutions[l] = solve_layer(report.layers[l], cost, options.method, scale);
  });

  std::vector<AssignedPair> pairs;
  for (const Atom& a : report.split.common.atoms()) pairs.push_back({a.skill, a.skill, a.mass});
  for (const auto& sol : report.layer_solutions) {
    pairs.insert(pairs.end(), sol.assignment.pairs.begin(), sol.assignment.pairs.end());
  }
  report.assignment = make_assignment(std::move(pairs), scale, cost);
  return report;
}

Assignment solve(const DiscreteDistribution& workers, const DiscreteDistribution& jobs,
                 const MismatchCost& cost, const SolveOptions& options) {
  return solve_detailed(workers, jobs, cost, options).assignment;
}

double zeta_threshold(const DiscreteDistribution& workers, const DiscreteDistribution& jobs) {
  const CommonSplit split = common_component(workers, jobs);
  std::set<double> support;
  for (const Atom& a : split.workers_rem.atoms()) support.insert(a.skill);
  for (const Atom& a : split.jobs_rem.atoms()) support.insert(a.skill);
  if (support.size() < 2) return 0.0;

  const std::vector<double> s(support.begin(), support.end());
  std::vector<double> distances;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) distances.push_back(s[j] - s[i]);
  }
  std::sort(distances.begin(), distances.end());
  distances.erase(std::unique(distances.begin(), distances.end()), distances.end());
  const double delta = distances.front();

  // For fixed D' the slack delta'^z + D'^z - 2^(1-z) (D' - delta')^z grows
  // with delta', so the binding case is delta' = delta with D' > 2 delta.
  std::vector<double> large;
  for (double d : distances) {
    if (d - delta > delta) large.push_back(d);
  }
  if (large.empty()) return 0.0;

  const auto holds = [&](double zeta) {
    for (double D : large) {
      const double lhs = std::pow(2.0, 1.0 - zeta) * std::pow(D - delta, zeta);
      const double rhs = std::pow(delta, zeta) + std::pow(D, zeta);
      if (lhs > rhs * (1.0 + 1e-12)) return false;
    }
    return true;
  };

  constexpr double kStep = 1e-3;
  constexpr int kSteps = 1000;
  double failing = -1.0;
  for (int i = kSteps; i >= 0; --i) {
    const double zeta = i * kStep;
    if (!holds(zeta)) {
      failing = zeta;
      break;
    }
  }
  if (failing < 0.0) return 0.0;
  double lo = failing;
  double hi = std::min(1.0, failing + kStep);
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

Assignment layered_positive(const DiscreteDistribution& workers,
                            const DiscreteDistribution& jobs, const MismatchCost& cost) {
  const CommonSplit split = common_component(workers, jobs);
  const std::vector<Layer> layers = decompose_layers(split.workers_rem, split.jobs_rem);
  std::vector<AssignedPair> pairs;
  for (const Atom& a : split.common.atoms()) pairs.push_back({a.skill, a.skill, a.mass});
  for (const Layer& layer : layers) {
    std::vector<double> w, z;
    for (const LayerPoint& p : layer.points) {
      (p.side == Side::kWorker ? w : z).push_back(p.skill);
    }
    for (std::size_t k = 0; k < w.size(); ++k) pairs.push_back({w[k], z[k], layer.mass});
  }
  return make_assignment(std::move(pairs), split.common.scale(), cost);
}

Assignment positive_sorting_convex(const DiscreteDistribution& workers,
                                   const DiscreteDistribution& jobs,
                                   const MismatchCost& cost) {
  const ScaledPair p = to_common_scale(workers, jobs);
  const auto& w = p.workers.atoms();
  const auto& z = p.jobs.atoms();
  std::vector<AssignedPair> pairs;
  std::size_t i = 0, j = 0;
  std::int64_t w_left = w.empty() ? 0 : w[0].mass;
  std::int64_t z_left = z.empty() ? 0 : z[0].mass;
  while (i < w.size() && j < z.size()) {
    const std::int64_t m = std::min(w_left, z_left);
    pairs.push_back({w[i].skill, z[j].skill, m});
    w_left -= m;
    z_left -= m;
    if (w_left == 0 && ++i < w.size()) w_left = w[i].mass;
    if (z_left == 0 && ++j < z.size()) z_left = z[j].mass;
  }
  return make_assignment(std::move(pairs), p.workers.scale(), cost);
}

}  // namespace csort
