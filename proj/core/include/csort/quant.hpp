#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csort/cost.hpp"
#include "csort/distributions.hpp"
#include "csort/dual.hpp"
#include "csort/solver.hpp"

namespace csort {

// Exact non-negative fraction num / den in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  // "a/b" or a finite decimal such as "0.25". Throws ParamError.
  static Rational parse(const std::string& text);
  // Best approximation with denominator at most max_denominator (continued
  // fractions). Throws ParamError for non-finite or negative input.
  static Rational approximate(double value, std::int64_t max_denominator);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

struct EconomyPair {
  DiscreteDistribution workers;
  DiscreteDistribution jobs;
};

// Workers B(n, p) and jobs B(n, 1 - p) on skills 0..n, exact over scale den^n.
EconomyPair reflecting_binomial(int n, Rational p);

// ratio_workers : ratio_jobs weighting of B(n, p) against B(n, p_hat) for
// workers, and of B(n, 1 - p) against B(n, 1 - p_hat) for jobs, over the
// smallest scale holding both components exactly.
EconomyPair binomial_mixture(int n, Rational p, Rational p_hat, std::int64_t ratio_a,
                             std::int64_t ratio_b);

// Evenly spaced atoms of equal mass on one side of the economy.
struct UniformSegment {
  double lo = 0.0;
  double hi = 0.0;
  int atoms = 1;  // at lo + (k + offset) (hi - lo) / atoms, k = 0..atoms-1
  double offset = 0.0;
  std::int64_t mass_per_atom = 1;
  bool workers = true;
};
EconomyPair piecewise_uniform(const std::vector<UniformSegment>& segments);

enum class GenKind { kReflectingBinomial, kBinomialMixture, kPiecewiseUniform };

struct GenParams {
  int n = 4;
  // Exact probability text ("1/3", "0.25"); takes precedence over p_value.
  std::string p;
  std::optional<double> p_value;
  std::optional<std::int64_t> max_denominator;
  std::string p_hat = "1";
  std::int64_t ratio_a = 3;
  std::int64_t ratio_b = 1;
  std::vector<UniformSegment> segments;
};

// Dispatches on kind. A floating p without max_denominator is a ParamError.
EconomyPair gen_distribution(GenKind kind, const GenParams& params);

struct EconomyFixture {
  DiscreteDistribution workers;
  DiscreteDistribution jobs;
  ProductionSpec spec;
  std::string label;

  // Equal total mass and g, h defined on every support point. Throws.
  void validate() const;
};

// Output functions used by presets when no wage data is supplied: g(x) =
// 1000 + x and h(z) = z over [lo, hi].
ProductionSpec default_production(double lo, double hi, MismatchCost cost);

EconomyFixture reflecting_binomial_preset(const MismatchCost& cost);
EconomyFixture mixture_preset(const MismatchCost& cost);

// Three regions on [0, 3000] with atoms of mass 10 every 10 units. Region 1
// has workers at 0..490 and jobs at 510..1000, so its negative sorting is
// x + z = 1000. Region 2 has jobs at 1010..1500 and workers at 1510..2000,
// region 3 workers at 2010..2500 and jobs at 2510..3000. With common_mass, 25
// perfectly paired atoms of mass 10 are added at 760..1000 on both sides.
EconomyFixture regions_preset(const MismatchCost& cost, bool common_mass = true);

struct WagePercentile {
  double rank = 0.0;  // in [0, 1]
  double wage = 0.0;
};

// Rank to wage by linear interpolation, clamped outside the table. Ranks must
// increase strictly within [0, 1] and wages must be positive and
// nondecreasing; throws CalibrationError otherwise.
TabulatedFunction calibrate_g(const std::vector<WagePercentile>& percentiles);

// Share of F mass strictly below skill.
double worker_rank(const DiscreteDistribution& workers, double skill);

// g over skills: each support point of F receives the wage at its rank.
TabulatedFunction wages_on_skills(const DiscreteDistribution& workers,
                                  const TabulatedFunction& rank_to_wage);

// CSV `rank,wage`.
std::vector<WagePercentile> parse_wage_percentiles_csv(std::istream& in,
                                                       const std::string& source_name);

// CSV `job_skill,occupation`.
std::map<double, std::string> parse_occupation_map_csv(std::istream& in,
                                                       const std::string& source_name);

struct Segment {
  std::string name;
  double lo = 0.0;  // occupation rank interval [lo, hi), closed at 1
  double hi = 1.0;
};

std::vector<Segment> default_segments();

// Observed within-occupation dispersion for one segment.
struct DataDispersion {
  double var_log_wage = 0.0;
  double mad_log_wage = 0.0;
};

// CSV `segment,var_log_wage,mad_log_wage`.
std::map<std::string, DataDispersion> parse_data_dispersion_csv(std::istream& in,
                                                                const std::string& source_name);

struct JobDispersion {
  double z = 0.0;
  std::string occupation;
  double mean_wage = 0.0;
  double mean_log_wage = 0.0;
  double var_log_wage = 0.0;
  double mad_log_wage = 0.0;  // mean absolute deviation from mean_log_wage
  double employment_share = 0.0;
  std::size_t worker_types = 0;  // distinct worker skills assigned
};

struct OccupationDispersion {
  std::string label;
  std::vector<double> job_skills;
  double rank = 0.0;  // employment-weighted midpoint rank by mean wage
  double mean_wage = 0.0;
  double mean_log_wage = 0.0;
  double var_log_wage = 0.0;
  double mad_log_wage = 0.0;
  double employment_share = 0.0;
  std::size_t worker_types = 0;
};

struct SegmentDispersion {
  Segment segment;
  double employment_share = 0.0;
  double var_log_wage = 0.0;  // employment-weighted within-occupation variance
  double mad_log_wage = 0.0;
  std::optional<double> explained_sq;   // model variance / data variance
  std::optional<double> explained_abs;  // model MAD / data MAD
};

struct DispersionReport {
  std::vector<JobDispersion> per_job;
  std::vector<OccupationDispersion> occupations;
  std::vector<SegmentDispersion> segments;
  std::vector<std::string> warnings;
};

struct DispersionOptions {
  std::vector<Segment> segments = default_segments();
  // Jobs missing from a non-empty map fall back to their own skill.
  std::map<double, std::string> occupation_map;
  std::map<std::string, DataDispersion> data;
};

// Wages w = g and values v = h with zero potentials on every support point.
// Stands in for duals when the assignment comes from a comparator such as the
// convex-cost quantile coupling.
DualSolution output_wages(const EconomyFixture& economy);

// Within-job log-wage moments of the workers assigned to each job, grouped
// into occupations and summarized by segment. Wages must be positive on every
// assigned worker; throws DomainError otherwise.
DispersionReport dispersion_report(const EconomyFixture& economy, const Assignment& assignment,
                                   const DualSolution& dual,
                                   const DispersionOptions& options = {});

// `occupation_rank,mean_wage,var_log_wage,employment_share`, one row per
// occupation in rank order.
void write_plot_csv(std::ostream& out, const DispersionReport& report);

}  // namespace csort
