#include "csort/layering.hpp"

#include <algorithm>

#include "csort/errors.hpp"

namespace csort {

const char* to_string(Side side) { return side == Side::kWorker ? "worker" : "job"; }

bool Layer::alternates() const {
  if (points.empty() || points.size() % 2 != 0) return false;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].skill > points[i - 1].skill)) return false;
    if (points[i].side == points[i - 1].side) return false;
  }
  return true;
}

std::vector<Layer> decompose_layers(const DiscreteDistribution& workers_rem,
                                    const DiscreteDistribution& jobs_rem) {
  const ScaledPair p = to_common_scale(workers_rem, jobs_rem);
  for (const Atom& a : p.workers.atoms()) {
    if (p.jobs.mass_at(a.skill) != 0) {
      throw PreconditionViolated(
          "layering needs disjoint worker/job supports; both have mass at skill " +
          std::to_string(a.skill));
    }
  }

  // Jumps of H in skill order: (skill, value before, value after).
  struct Jump {
    double skill;
    std::int64_t before;
    std::int64_t after;
  };
  std::vector<Jump> jumps;
  std::vector<std::int64_t> levels{0};
  {
    const StepFunction h = underqualification(p.workers, p.jobs);
    std::int64_t previous = 0;
    for (const auto& b : h.breakpoints()) {
      jumps.push_back({b.skill, previous, b.value});
      levels.push_back(b.value);
      previous = b.value;
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<Layer> layers;
  for (std::size_t l = 1; l < levels.size(); ++l) {
    const std::int64_t lo = levels[l - 1];
    const std::int64_t hi = levels[l];
    Layer layer{hi - lo, {}, lo, hi};
    for (const Jump& j : jumps) {
      const std::int64_t a = std::min(j.before, j.after);
      const std::int64_t b = std::max(j.before, j.after);
      if (a <= lo && b >= hi) {
        layer.points.push_back({j.skill, j.after > j.before ? Side::kWorker : Side::kJob});
      }
    }
    if (layer.points.empty()) continue;
    // Adjacent bands with the same crossing set form one layer.
    if (!layers.empty() && layers.back().band_hi == lo && layers.back().points == layer.points) {
      layers.back().band_hi = hi;
      layers.back().mass += layer.mass;
      continue;
    }
    if (!layer.alternates()) {
      throw InternalInvariantViolation("layer (" + std::to_string(lo) + "," +
                                       std::to_string(hi) + "] does not alternate");
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

}  // namespace csort
