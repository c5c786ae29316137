#pragma once

#include <cstdint>
#include <vector>

#include "csort/distributions.hpp"

namespace csort {

enum class Side { kWorker, kJob };

const char* to_string(Side side);

struct LayerPoint {
  double skill = 0.0;
  Side side = Side::kWorker;

  friend bool operator==(const LayerPoint&, const LayerPoint&) = default;
};

// Alternating worker/job sequence carrying a common per-point mass equal to the
// width of the level band (band_lo, band_hi] of the underqualification
// function that it slices.
struct Layer {
  std::int64_t mass = 0;
  std::vector<LayerPoint> points;
  std::int64_t band_lo = 0;
  std::int64_t band_hi = 0;

  std::size_t pairs() const { return points.size() / 2; }
  // Strictly increasing skills, strictly alternating sides, even length.
  bool alternates() const;
};

// Slices H = F_rem - G_rem at every distinct level it attains. A skill whose
// jump of H passes through a band belongs to that band's layer, as a worker
// when H increases there and as a job when it decreases.
//
// Requires equal total mass and disjoint supports (the remainders of
// common_component); throws MassMismatch or PreconditionViolated.
std::vector<Layer> decompose_layers(const DiscreteDistribution& workers_rem,
                                    const DiscreteDistribution& jobs_rem);

}  // namespace csort
