#include "csort/quant.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "csort/errors.hpp"

namespace csort {

namespace {

std::int64_t mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ParamError(std::string("integer overflow computing ") + what);
  }
  return out;
}

std::int64_t add(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ParamError(std::string("integer overflow computing ") + what);
  }
  return out;
}

std::int64_t ipow(std::int64_t base, int exp, const char* what) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out = mul(out, base, what);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const std::string& where, const char* field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError(where + ": " + field + " is not a finite number: '" + text + "'");
  }
  return v;
}

// Reads rows of a CSV with the given header, calling fn(cells, where) per
// non-blank line.
template <class Fn>
void read_csv(std::istream& in, const std::string& source, const std::vector<std::string>& header,
              Fn&& fn) {
  std::string line;
  std::string expected;
  for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
  if (!std::getline(in, line)) throw ParseError(source + ": empty file, expected '" + expected + "'");
  auto cells = split(line);
  for (auto& c : cells) {
    for (char& ch : c) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (cells != header) {
    throw ParseError(source + ": header must be '" + expected + "', got '" + trim(line) + "'");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    cells = split(line);
    if (cells.size() != header.size()) {
      throw ParseError(where + ": expected " + std::to_string(header.size()) + " columns");
    }
    fn(cells, where);
  }
}

void check_probability(const Rational& p, const char* name, bool allow_bounds) {
  const bool ok = allow_bounds ? p.num <= p.den : (p.num > 0 && p.num < p.den);
  if (!ok) {
    throw ParamError(std::string(name) + " must lie in " + (allow_bounds ? "[0,1]" : "(0,1)") +
                     ", got " + std::to_string(p.num) + "/" + std::to_string(p.den));
  }
}

// Masses of B(n, a/b) over scale b^n: C(n,k) a^k (b-a)^(n-k).
std::vector<std::int64_t> binomial_masses(int n, const Rational& p) {
  std::vector<std::int64_t> out(n + 1);
  std::int64_t choose = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) choose = mul(choose, n - k + 1, "binomial coefficient") / k;
    const std::int64_t m = mul(ipow(p.num, k, "binomial mass"),
                               ipow(p.den - p.num, n - k, "binomial mass"), "binomial mass");
    out[k] = mul(choose, m, "binomial mass");
  }
  return out;
}

DiscreteDistribution on_grid(const std::vector<std::int64_t>& masses, std::int64_t factor,
                             std::int64_t scale) {
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    atoms.push_back({static_cast<double>(k), mul(masses[k], factor, "mixture mass")});
  }
  return DiscreteDistribution(std::move(atoms), scale);
}

Rational complement(const Rational& p) { return Rational::make(p.den - p.num, p.den); }

void check_n(int n) {
  if (n < 1) throw ParamError("n must be at least 1, got " + std::to_string(n));
}

Rational resolve_probability(const std::string& text, const std::optional<double>& value,
                             const std::optional<std::int64_t>& max_den, const char* name) {
  if (!text.empty()) return Rational::parse(text);
  if (!value) throw ParamError(std::string(name) + " is required");
  if (!max_den) {
    throw ParamError(std::string(name) +
                     " given as a floating value needs a maximum denominator to be rationalized");
  }
  return Rational::approximate(*value, *max_den);
}

struct Moments {
  double mean_wage = 0.0;
  double mean_log = 0.0;
  double var_log = 0.0;
  double mad_log = 0.0;
  std::size_t types = 0;
  std::int64_t mass = 0;
};

// Mass-weighted moments of log wages. Deviations are taken from the first
// entry so that a single worker type gives exactly zero spread.
Moments moments(const std::vector<std::pair<double, std::int64_t>>& wage_mass) {
  Moments m;
  std::set<double> types;
  if (wage_mass.empty()) return m;
  const double ref = std::log(wage_mass.front().first);
  double shift = 0.0, wage = 0.0;
  for (const auto& [w, mass] : wage_mass) {
    m.mass += mass;
    shift += static_cast<double>(mass) * (std::log(w) - ref);
    wage += static_cast<double>(mass) * w;
    types.insert(w);
  }
  const double total = static_cast<double>(m.mass);
  m.types = types.size();
  m.mean_wage = types.size() == 1 ? wage_mass.front().first : wage / total;
  m.mean_log = ref + shift / total;
  if (types.size() == 1) return m;
  double sq = 0.0, ab = 0.0;
  for (const auto& [w, mass] : wage_mass) {
    const double d = std::log(w) - m.mean_log;
    sq += static_cast<double>(mass) * d * d;
    ab += static_cast<double>(mass) * std::abs(d);
  }
  m.var_log = sq / total;
  m.mad_log = ab / total;
  return m;
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) {
    throw ParamError("fraction needs a non-negative numerator and positive denominator, got " +
                     std::to_string(num) + "/" + std::to_string(den));
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Rational Rational::parse(const std::string& raw) {
  const std::string text = trim(raw);
  const auto bad = [&]() { return ParamError("cannot parse probability '" + raw + "'"); };
  const auto to_int = [&](const std::string& s) {
    std::int64_t v = 0;
    if (s.empty()) throw bad();
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw bad();
    return v;
  };
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    return make(to_int(trim(text.substr(0, slash))), to_int(trim(text.substr(slash + 1))));
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return make(to_int(text), 1);
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 15 || frac.find_first_not_of("0123456789") != std::string::npos) {
    throw bad();
  }
  const std::int64_t den = ipow(10, static_cast<int>(frac.size()), "decimal probability");
  const std::int64_t w = whole.empty() ? 0 : to_int(whole);
  return make(add(mul(w, den, "decimal probability"), to_int(frac), "decimal probability"), den);
}

Rational Rational::approximate(double value, std::int64_t max_denominator) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ParamError("cannot rationalize " + std::to_string(value));
  }
  if (max_denominator < 1) throw ParamError("maximum denominator must be positive");
  // Convergents p/q of the continued fraction, then the best semiconvergent.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = value;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(x);
    if (a_real > 4e18) break;
    const auto a = static_cast<std::int64_t>(a_real);
    std::int64_t q2 = 0, ap = 0;
    if (__builtin_mul_overflow(a, q1, &q2) || __builtin_add_overflow(q2, q0, &q2) ||
        q2 > max_denominator || __builtin_mul_overflow(a, p1, &ap) ||
        __builtin_add_overflow(ap, p0, &ap)) {
      break;
    }
    p0 = p1;
    q0 = q1;
    p1 = ap;
    q1 = q2;
    if (x == a_real) break;
    x = 1.0 / (x - a_real);
  }
  if (q1 == 0) return make(static_cast<std::int64_t>(std::floor(value)), 1);
  const std::int64_t k = (max_denominator - q0) / q1;
  const Rational semi = make(p0 + k * p1, q0 + k * q1);
  const Rational conv = make(p1, q1);
  return std::abs(semi.value() - value) < std::abs(conv.value() - value) ? semi : conv;
}

EconomyPair reflecting_binomial(int n, Rational p) {
  check_n(n);
  check_probability(p, "p", false);
  const std::int64_t scale = ipow(p.den, n, "binomial scale");
  return {on_grid(binomial_masses(n, p), 1, scale),
          on_grid(binomial_masses(n, complement(p)), 1, scale)};
}

EconomyPair binomial_mixture(int n, Rational p, Rational p_hat, std::int64_t ratio_a,
                             std::int64_t ratio_b) {
  check_n(n);
  check_probability(p, "p", false);
  check_probability(p_hat, "p_hat", true);
  if (ratio_a <= 0 || ratio_b <= 0) {
    throw ParamError("mixture ratio must be positive, got " + std::to_string(ratio_a) + ":" +
                     std::to_string(ratio_b));
  }
  const std::int64_t d1 = ipow(p.den, n, "mixture scale");
  const std::int64_t d2 = ipow(p_hat.den, n, "mixture scale");
  const std::int64_t k = std::lcm(d1 / std::gcd(d1, ratio_a), d2 / std::gcd(d2, ratio_b));
  const std::int64_t f1 = mul(ratio_a, k, "mixture scale") / d1;
  const std::int64_t f2 = mul(ratio_b, k, "mixture scale") / d2;
  const std::int64_t scale = mul(add(ratio_a, ratio_b, "mixture scale"), k, "mixture scale");
  const auto w1 = on_grid(binomial_masses(n, p), f1, scale);
  const auto w2 = on_grid(binomial_masses(n, p_hat), f2, scale);
  const auto j1 = on_grid(binomial_masses(n, complement(p)), f1, scale);
  const auto j2 = on_grid(binomial_masses(n, complement(p_hat)), f2, scale);
  return {w1 + w2, j1 + j2};
}

EconomyPair piecewise_uniform(const std::vector<UniformSegment>& segments) {
  std::vector<Atom> workers, jobs;
  for (const auto& s : segments) {
    if (s.atoms < 1 || s.mass_per_atom < 1 || !(s.hi >= s.lo)) {
      throw ParamError("uniform segment needs lo <= hi, at least one atom and positive mass");
    }
    const double step = (s.hi - s.lo) / s.atoms;
    for (int k = 0; k < s.atoms; ++k) {
      (s.workers ? workers : jobs).push_back({s.lo + (k + s.offset) * step, s.mass_per_atom});
    }
  }
  return {DiscreteDistribution(std::move(workers)), DiscreteDistribution(std::move(jobs))};
}

EconomyPair gen_distribution(GenKind kind, const GenParams& params) {
  switch (kind) {
    case GenKind::kReflectingBinomial:
      return reflecting_binomial(
          params.n, resolve_probability(params.p, params.p_value, params.max_denominator, "p"));
    case GenKind::kBinomialMixture:
      return binomial_mixture(
          params.n, resolve_probability(params.p, params.p_value, params.max_denominator, "p"),
          Rational::parse(params.p_hat), params.ratio_a, params.ratio_b);
    case GenKind::kPiecewiseUniform:
      return piecewise_uniform(params.segments);
  }
  throw ParamError("unknown distribution kind");
}

void EconomyFixture::validate() const {
  to_common_scale(workers, jobs);
  spec.validate();
  for (const auto* d : {&workers, &jobs}) {
    for (const Atom& a : d->atoms()) {
      spec.g(a.skill);
      spec.h(a.skill);
    }
  }
}

ProductionSpec default_production(double lo, double hi, MismatchCost cost) {
  return ProductionSpec{TabulatedFunction::affine(lo, hi, 1000.0, 1.0),
                        TabulatedFunction::identity(lo, hi), std::move(cost)};
}

EconomyFixture reflecting_binomial_preset(const MismatchCost& cost) {
  auto pair = reflecting_binomial(4, Rational::make(1, 3));
  return {std::move(pair.workers), std::move(pair.jobs), default_production(0, 4, cost),
          "reflecting-binomial"};
}

EconomyFixture mixture_preset(const MismatchCost& cost) {
  auto pair = binomial_mixture(4, Rational::make(1, 3), Rational::make(1, 1), 3, 1);
  return {std::move(pair.workers), std::move(pair.jobs), default_production(0, 4, cost),
          "mixture"};
}

EconomyFixture regions_preset(const MismatchCost& cost, bool common_mass) {
  std::vector<UniformSegment> segments = {
      {0, 500, 50, 0.0, 10, true},     {500, 1000, 50, 1.0, 10, false},
      {1000, 1500, 50, 1.0, 10, false}, {1500, 2000, 50, 1.0, 10, true},
      {2000, 2500, 50, 1.0, 10, true},  {2500, 3000, 50, 1.0, 10, false},
  };
  if (common_mass) {
    segments.push_back({750, 1000, 25, 1.0, 10, true});
    segments.push_back({750, 1000, 25, 1.0, 10, false});
  }
  auto pair = piecewise_uniform(segments);
  return {std::move(pair.workers), std::move(pair.jobs), default_production(0, 3000, cost),
          common_mass ? "regions" : "regions-base"};
}

TabulatedFunction calibrate_g(const std::vector<WagePercentile>& percentiles) {
  if (percentiles.empty()) throw CalibrationError("no wage percentiles supplied");
  std::vector<TabulatedFunction::Knot> knots;
  for (std::size_t i = 0; i < percentiles.size(); ++i) {
    const auto& p = percentiles[i];
    if (!(p.rank >= 0.0 && p.rank <= 1.0)) {
      throw CalibrationError("rank " + std::to_string(p.rank) + " outside [0,1]");
    }
    if (!(p.wage > 0.0) || !std::isfinite(p.wage)) {
      throw CalibrationError("wage at rank " + std::to_string(p.rank) + " must be positive");
    }
    if (i > 0 && !(p.rank > percentiles[i - 1].rank)) {
      throw CalibrationError("ranks must increase strictly, got " +
                             std::to_string(percentiles[i - 1].rank) + " then " +
                             std::to_string(p.rank));
    }
    if (i > 0 && p.wage < percentiles[i - 1].wage) {
      throw CalibrationError("wages must be sorted by rank: " +
                             std::to_string(percentiles[i - 1].wage) + " at rank " +
                             std::to_string(percentiles[i - 1].rank) + " exceeds " +
                             std::to_string(p.wage) + " at rank " + std::to_string(p.rank));
    }
    knots.push_back({p.rank, p.wage});
  }
  return TabulatedFunction(std::move(knots), TabulatedFunction::Extrapolation::kClamp);
}

double worker_rank(const DiscreteDistribution& workers, double skill) {
  const std::int64_t total = workers.total_mass();
  if (total == 0) throw DomainError("rank in an empty distribution");
  std::int64_t below = 0;
  for (const Atom& a : workers.atoms()) {
    if (a.skill >= skill) break;
    below += a.mass;
  }
  return static_cast<double>(below) / static_cast<double>(total);
}

TabulatedFunction wages_on_skills(const DiscreteDistribution& workers,
                                  const TabulatedFunction& rank_to_wage) {
  std::vector<TabulatedFunction::Knot> knots;
  for (const Atom& a : workers.atoms()) {
    knots.push_back({a.skill, rank_to_wage(worker_rank(workers, a.skill))});
  }
  return TabulatedFunction(std::move(knots), TabulatedFunction::Extrapolation::kClamp);
}

std::vector<WagePercentile> parse_wage_percentiles_csv(std::istream& in,
                                                       const std::string& source_name) {
  std::vector<WagePercentile> out;
  read_csv(in, source_name, {"rank", "wage"}, [&](const auto& cells, const std::string& where) {
    out.push_back({parse_number(cells[0], where, "rank"), parse_number(cells[1], where, "wage")});
  });
  return out;
}

std::map<double, std::string> parse_occupation_map_csv(std::istream& in,
                                                       const std::string& source_name) {
  std::map<double, std::string> out;
  read_csv(in, source_name, {"job_skill", "occupation"},
           [&](const auto& cells, const std::string& where) {
             const double z = parse_number(cells[0], where, "job_skill");
             if (cells[1].empty()) throw ParseError(where + ": occupation is empty");
             if (!out.emplace(z, cells[1]).second) {
               throw ParseError(where + ": job_skill " + cells[0] + " listed twice");
             }
           });
  return out;
}

std::map<std::string, DataDispersion> parse_data_dispersion_csv(std::istream& in,
                                                                const std::string& source_name) {
  std::map<std::string, DataDispersion> out;
  read_csv(in, source_name, {"segment", "var_log_wage", "mad_log_wage"},
           [&](const auto& cells, const std::string& where) {
             DataDispersion d{parse_number(cells[1], where, "var_log_wage"),
                              parse_number(cells[2], where, "mad_log_wage")};
             if (d.var_log_wage < 0 || d.mad_log_wage < 0) {
               throw ParseError(where + ": dispersion must be non-negative");
             }
             if (!out.emplace(cells[0], d).second) {
               throw ParseError(where + ": segment '" + cells[0] + "' listed twice");
             }
           });
  return out;
}

std::vector<Segment> default_segments() {
  return {{"bottom", 0.0, 0.2}, {"middle", 0.2, 0.8}, {"top", 0.8, 1.0}, {"overall", 0.0, 1.0}};
}

DualSolution output_wages(const EconomyFixture& economy) {
  std::set<double> skills;
  for (const auto* d : {&economy.workers, &economy.jobs}) {
    for (const Atom& a : d->atoms()) skills.insert(a.skill);
  }
  DualSolution out;
  for (double s : skills) out.points.push_back({s, 0.0, 0.0, economy.spec.g(s), economy.spec.h(s)});
  return out;
}

DispersionReport dispersion_report(const EconomyFixture& economy, const Assignment& assignment,
                                   const DualSolution& dual, const DispersionOptions& options) {
  DispersionReport report;
  const std::int64_t total_mass = assignment.total_mass();
  if (total_mass <= 0) throw DomainError("assignment carries no mass");
  const double total = static_cast<double>(total_mass);

  std::map<double, std::vector<std::pair<double, std::int64_t>>> by_job;
  std::map<double, std::set<double>> skills_at_job;
  for (const auto& p : assignment.pairs) {
    const double w = dual.at(p.x).w;
    if (!(w > 0.0)) {
      throw DomainError("wage at worker skill " + format_skill(p.x) + " is " + std::to_string(w) +
                        "; log wages need positive wages, raise g or lower the cost scale");
    }
    by_job[p.z].emplace_back(w, p.mass);
    skills_at_job[p.z].insert(p.x);
  }
  for (const Atom& a : economy.jobs.atoms()) {
    if (!by_job.count(a.skill)) {
      report.warnings.push_back("job " + format_skill(a.skill) + " has no assigned mass; skipped");
    }
  }

  const auto occupation_of = [&](double z) {
    const auto it = options.occupation_map.find(z);
    return it != options.occupation_map.end() ? it->second : format_skill(z);
  };

  std::map<std::string, std::vector<std::pair<double, std::int64_t>>> by_occ;
  std::map<std::string, std::vector<double>> occ_jobs;
  std::map<std::string, std::set<double>> occ_skills;
  for (const auto& [z, entries] : by_job) {
    const Moments m = moments(entries);
    JobDispersion j;
    j.z = z;
    j.occupation = occupation_of(z);
    j.mean_wage = m.mean_wage;
    j.mean_log_wage = m.mean_log;
    j.var_log_wage = m.var_log;
    j.mad_log_wage = m.mad_log;
    j.employment_share = static_cast<double>(m.mass) / total;
    j.worker_types = skills_at_job[z].size();
    report.per_job.push_back(j);
    auto& bucket = by_occ[j.occupation];
    bucket.insert(bucket.end(), entries.begin(), entries.end());
    occ_jobs[j.occupation].push_back(z);
    occ_skills[j.occupation].insert(skills_at_job[z].begin(), skills_at_job[z].end());
  }

  for (const auto& [label, entries] : by_occ) {
    const Moments m = moments(entries);
    OccupationDispersion o;
    o.label = label;
    o.job_skills = occ_jobs[label];
    o.mean_wage = m.mean_wage;
    o.mean_log_wage = m.mean_log;
    o.var_log_wage = m.var_log;
    o.mad_log_wage = m.mad_log;
    o.employment_share = static_cast<double>(m.mass) / total;
    o.worker_types = occ_skills[label].size();
    report.occupations.push_back(std::move(o));
  }
  std::stable_sort(report.occupations.begin(), report.occupations.end(),
                   [](const auto& a, const auto& b) {
                     if (a.mean_wage != b.mean_wage) return a.mean_wage < b.mean_wage;
                     return a.job_skills.front() < b.job_skills.front();
                   });
  double cumulative = 0.0;
  for (auto& o : report.occupations) {
    o.rank = cumulative + 0.5 * o.employment_share;
    cumulative += o.employment_share;
  }

  for (const Segment& seg : options.segments) {
    SegmentDispersion s;
    s.segment = seg;
    double var = 0.0, mad = 0.0;
    for (const auto& o : report.occupations) {
      const bool inside = o.rank >= seg.lo && (o.rank < seg.hi || (seg.hi >= 1.0 && o.rank <= 1.0));
      if (!inside) continue;
      s.employment_share += o.employment_share;
      var += o.employment_share * o.var_log_wage;
      mad += o.employment_share * o.mad_log_wage;
    }
    if (s.employment_share > 0.0) {
      s.var_log_wage = var / s.employment_share;
      s.mad_log_wage = mad / s.employment_share;
    }
    if (const auto it = options.data.find(seg.name); it != options.data.end()) {
      if (it->second.var_log_wage > 0.0) s.explained_sq = s.var_log_wage / it->second.var_log_wage;
      if (it->second.mad_log_wage > 0.0) s.explained_abs = s.mad_log_wage / it->second.mad_log_wage;
    }
    report.segments.push_back(std::move(s));
  }
  return report;
}

void write_plot_csv(std::ostream& out, const DispersionReport& report) {
  out << "occupation_rank,mean_wage,var_log_wage,employment_share\n";
  for (const auto& o : report.occupations) {
    out << format_skill(o.rank) << ',' << format_skill(o.mean_wage) << ','
        << format_skill(o.var_log_wage) << ',' << format_skill(o.employment_share) << '\n';
  }
}

}  // namespace csort
