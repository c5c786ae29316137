#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace csort {

// One atom of a discrete measure. The true mass is mass / scale of the owning
// distribution.
struct Atom {
  double skill = 0.0;
  std::int64_t mass = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Finite atomic measure on the real line with exact integer masses over a
// positive integer denominator. Atoms are kept sorted by strictly increasing
// skill and zero-mass atoms are never stored. Instances are immutable.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  // Sorts the atoms, merges atoms whose skills are within merge_tolerance of
  // the first atom of a run (exact equality by default) and drops zero
  // masses. Throws DomainError on negative mass, non-finite skill or a
  // non-positive scale.
  explicit DiscreteDistribution(std::vector<Atom> atoms, std::int64_t scale = 1,
                                double merge_tolerance = 0.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::int64_t scale() const { return scale_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  // Sum of integer masses (in units of 1/scale).
  std::int64_t total_mass() const;
  double true_mass() const;

  // Integer mass stored at exactly this skill, 0 if absent.
  std::int64_t mass_at(double skill) const;

  std::vector<double> support() const;

  // Same measure expressed over new_scale, which must be a positive multiple
  // of scale().
  DiscreteDistribution rescaled(std::int64_t new_scale) const;

  // Atom-wise sum and difference. Both operands must share a scale; the
  // difference must not go negative.
  DiscreteDistribution operator+(const DiscreteDistribution& other) const;
  DiscreteDistribution operator-(const DiscreteDistribution& other) const;

  friend bool operator==(const DiscreteDistribution&,
                         const DiscreteDistribution&) = default;

 private:
  std::vector<Atom> atoms_;
  std::int64_t scale_ = 1;
};

std::ostream& operator<<(std::ostream& os, const DiscreteDistribution& d);

// Shortest decimal text that reads back to exactly the same double.
std::string format_skill(double skill);

// Least common multiple of the two scales.
std::int64_t common_scale(const DiscreteDistribution& a,
                          const DiscreteDistribution& b);

// Both distributions re-expressed over their common scale. Throws
// MassMismatch when the total true masses differ.
struct ScaledPair {
  DiscreteDistribution workers;
  DiscreteDistribution jobs;
};
ScaledPair to_common_scale(const DiscreteDistribution& workers,
                           const DiscreteDistribution& jobs);

// Right-continuous piecewise-constant integer function, 0 below the first
// breakpoint. Consecutive stored values always differ.
class StepFunction {
 public:
  struct Breakpoint {
    double skill = 0.0;
    std::int64_t value = 0;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  StepFunction() = default;
  explicit StepFunction(std::vector<Breakpoint> breakpoints);

  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  std::int64_t value_at(double skill) const;
  std::int64_t min_value() const;
  std::int64_t max_value() const;

 private:
  std::vector<Breakpoint> breakpoints_;
};

// Decomposition F = common + F_rem, G = common + G_rem where common is the
// atom-wise minimum. The remainders have disjoint supports.
struct CommonSplit {
  DiscreteDistribution common;
  DiscreteDistribution workers_rem;
  DiscreteDistribution jobs_rem;
};

CommonSplit common_component(const DiscreteDistribution& workers,
                             const DiscreteDistribution& jobs);

// H(s) = F(s) - G(s) on cumulative integer masses at the common scale.
StepFunction underqualification(const DiscreteDistribution& workers,
                                const DiscreteDistribution& jobs);

// CSV with a required `skill,mass` header. Masses are parsed as exact
// decimals and rationalized to one file-wide scale.
DiscreteDistribution parse_distribution_csv(std::istream& in,
                                            const std::string& source_name);
DiscreteDistribution read_distribution_csv(const std::string& path);

}  // namespace csort
