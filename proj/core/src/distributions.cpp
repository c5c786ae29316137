#include "csort/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "csort/errors.hpp"

namespace csort {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw DomainError("integer mass overflow while rescaling distribution");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw DomainError("integer mass overflow while summing distribution");
  }
  return out;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms,
                                           std::int64_t scale,
                                           double merge_tolerance)
    : scale_(scale) {
  if (scale <= 0) {
    throw DomainError("distribution scale must be positive, got " +
                      std::to_string(scale));
  }
  if (!(merge_tolerance >= 0.0)) {
    throw DomainError("merge tolerance must be non-negative");
  }
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.skill)) {
      throw DomainError("atom skill must be finite");
    }
    if (a.mass < 0) {
      throw DomainError("atom mass must be non-negative, got " +
                        std::to_string(a.mass) + " at skill " +
                        std::to_string(a.skill));
    }
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.skill < b.skill; });
  atoms_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && a.skill - atoms_.back().skill <= merge_tolerance) {
      atoms_.back().mass = checked_add(atoms_.back().mass, a.mass);
    } else {
      atoms_.push_back(a);
    }
  }
  std::erase_if(atoms_, [](const Atom& a) { return a.mass == 0; });
}

std::int64_t DiscreteDistribution::total_mass() const {
  std::int64_t total = 0;
  for (const Atom& a : atoms_) total = checked_add(total, a.mass);
  return total;
}

double DiscreteDistribution::true_mass() const {
  return static_cast<double>(total_mass()) / static_cast<double>(scale_);
}

std::int64_t DiscreteDistribution::mass_at(double skill) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), skill,
      [](const Atom& a, double s) { return a.skill < s; });
  return (it != atoms_.end() && it->skill == skill) ? it->mass : 0;
}

std::vector<double> DiscreteDistribution::support() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) out.push_back(a.skill);
  return out;
}

DiscreteDistribution DiscreteDistribution::rescaled(std::int64_t new_scale) const {
  if (new_scale <= 0 || new_scale % scale_ != 0) {
    throw DomainError("cannot rescale distribution from " + std::to_string(scale_) +
                      " to " + std::to_string(new_scale));
  }
  const std::int64_t factor = new_scale / scale_;
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.mass = checked_mul(a.mass, factor);
  return DiscreteDistribution(std::move(atoms), new_scale);
}

DiscreteDistribution DiscreteDistribution::operator+(
    const DiscreteDistribution& other) const {
  if (other.scale_ != scale_) {
    throw DomainError("cannot add distributions over different scales");
  }
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  return DiscreteDistribution(std::move(atoms), scale_);
}

DiscreteDistribution DiscreteDistribution::operator-(
    const DiscreteDistribution& other) const {
  if (other.scale_ != scale_) {
    throw DomainError("cannot subtract distributions over different scales");
  }
  std::vector<Atom> atoms = atoms_;
  for (const Atom& b : other.atoms_) {
    auto it = std::lower_bound(
        atoms.begin(), atoms.end(), b.skill,
        [](const Atom& a, double s) { return a.skill < s; });
    if (it == atoms.end() || it->skill != b.skill || it->mass < b.mass) {
      throw DomainError("distribution difference would be negative at skill " +
                        std::to_string(b.skill));
    }
    it->mass -= b.mass;
  }
  return DiscreteDistribution(std::move(atoms), scale_);
}

std::ostream& operator<<(std::ostream& os, const DiscreteDistribution& d) {
  os << '{';
  for (std::size_t i = 0; i < d.atoms().size(); ++i) {
    if (i) os << ", ";
    os << d.atoms()[i].skill << ':' << d.atoms()[i].mass;
  }
  return os << "}/" << d.scale();
}

std::string format_skill(double skill) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), skill);
  return std::string(buf, result.ptr);
}

std::int64_t common_scale(const DiscreteDistribution& a,
                          const DiscreteDistribution& b) {
  const std::int64_t g = std::gcd(a.scale(), b.scale());
  return checked_mul(a.scale() / g, b.scale());
}

ScaledPair to_common_scale(const DiscreteDistribution& workers,
                           const DiscreteDistribution& jobs) {
  const std::int64_t scale = common_scale(workers, jobs);
  ScaledPair out{workers.rescaled(scale), jobs.rescaled(scale)};
  if (out.workers.total_mass() != out.jobs.total_mass()) {
    std::ostringstream msg;
    msg << "worker and job distributions have unequal total mass ("
        << out.workers.total_mass() << " vs " << out.jobs.total_mass()
        << " over scale " << scale << ")";
    throw MassMismatch(msg.str());
  }
  return out;
}

StepFunction::StepFunction(std::vector<Breakpoint> breakpoints) {
  std::int64_t previous = 0;
  double previous_skill = -INFINITY;
  for (const Breakpoint& b : breakpoints) {
    if (!(b.skill > previous_skill)) {
      throw DomainError("step function breakpoints must be strictly increasing");
    }
    previous_skill = b.skill;
    if (b.value != previous) {
      breakpoints_.push_back(b);
      previous = b.value;
    }
  }
}

std::int64_t StepFunction::value_at(double skill) const {
  auto it = std::upper_bound(
      breakpoints_.begin(), breakpoints_.end(), skill,
      [](double s, const Breakpoint& b) { return s < b.skill; });
  if (it == breakpoints_.begin()) return 0;
  return std::prev(it)->value;
}

std::int64_t StepFunction::min_value() const {
  std::int64_t lo = 0;
  for (const auto& b : breakpoints_) lo = std::min(lo, b.value);
  return lo;
}

std::int64_t StepFunction::max_value() const {
  std::int64_t hi = 0;
  for (const auto& b : breakpoints_) hi = std::max(hi, b.value);
  return hi;
}

CommonSplit common_component(const DiscreteDistribution& workers,
                             const DiscreteDistribution& jobs) {
  const ScaledPair p = to_common_scale(workers, jobs);
  std::vector<Atom> common;
  for (const Atom& a : p.workers.atoms()) {
    const std::int64_t m = std::min(a.mass, p.jobs.mass_at(a.skill));
    if (m > 0) common.push_back({a.skill, m});
  }
  DiscreteDistribution c(std::move(common), p.workers.scale());
  return {c, p.workers - c, p.jobs - c};
}

StepFunction underqualification(const DiscreteDistribution& workers,
                                const DiscreteDistribution& jobs) {
  const ScaledPair p = to_common_scale(workers, jobs);
  std::vector<double> skills = p.workers.support();
  const std::vector<double> job_skills = p.jobs.support();
  skills.insert(skills.end(), job_skills.begin(), job_skills.end());
  std::sort(skills.begin(), skills.end());
  skills.erase(std::unique(skills.begin(), skills.end()), skills.end());

  std::vector<StepFunction::Breakpoint> points;
  points.reserve(skills.size());
  std::int64_t h = 0;
  for (double s : skills) {
    h += p.workers.mass_at(s) - p.jobs.mass_at(s);
    points.push_back({s, h});
  }
  return StepFunction(std::move(points));
}

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Decimal {
  std::int64_t digits = 0;  // value = digits / 10^places
  int places = 0;
};

constexpr int kMaxDecimalPlaces = 9;

Decimal parse_decimal(const std::string& text, const std::string& where) {
  Decimal d;
  bool seen_digit = false;
  bool seen_point = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_point) throw ParseError(where + ": malformed mass '" + text + "'");
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (seen_point) {
        if (++d.places > kMaxDecimalPlaces) {
          throw ParseError(where + ": mass '" + text + "' has more than " +
                           std::to_string(kMaxDecimalPlaces) + " decimal places");
        }
      }
      if (__builtin_mul_overflow(d.digits, 10, &d.digits) ||
          __builtin_add_overflow(d.digits, c - '0', &d.digits)) {
        throw ParseError(where + ": mass '" + text + "' is too large");
      }
    } else {
      throw ParseError(where + ": mass must be a non-negative decimal, got '" +
                       text + "'");
    }
  }
  if (!seen_digit) throw ParseError(where + ": empty mass field");
  return d;
}

}  // namespace

DiscreteDistribution parse_distribution_csv(std::istream& in,
                                            const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(source_name + ": empty file, expected header 'skill,mass'");
  }
  {
    std::stringstream header(line);
    std::string a, b;
    std::getline(header, a, ',');
    std::getline(header, b);
    if (lower(trim(a)) != "skill" || lower(trim(b)) != "mass") {
      throw ParseError(source_name + ": header must be 'skill,mass', got '" +
                       trim(line) + "'");
    }
  }

  std::vector<std::pair<double, Decimal>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(where + ": expected exactly two columns 'skill,mass'");
    }
    const std::string skill_text = trim(line.substr(0, comma));
    const std::string mass_text = trim(line.substr(comma + 1));
    double skill = 0.0;
    try {
      std::size_t used = 0;
      skill = std::stod(skill_text, &used);
      if (used != skill_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(where + ": skill is not a number: '" + skill_text + "'");
    }
    if (!std::isfinite(skill)) throw ParseError(where + ": skill must be finite");
    rows.emplace_back(skill, parse_decimal(mass_text, where));
  }

  int places = 0;
  for (const auto& [s, d] : rows) places = std::max(places, d.places);
  std::int64_t scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;

  std::vector<Atom> atoms;
  atoms.reserve(rows.size());
  std::int64_t g = scale;
  for (const auto& [skill, d] : rows) {
    std::int64_t m = d.digits;
    for (int i = d.places; i < places; ++i) {
      if (__builtin_mul_overflow(m, 10, &m)) {
        throw ParseError(source_name + ": mass overflow while rationalizing");
      }
    }
    atoms.push_back({skill, m});
    g = std::gcd(g, m);
  }
  if (g > 1) {
    for (Atom& a : atoms) a.mass /= g;
    scale /= g;
  }
  DiscreteDistribution out(std::move(atoms), scale);
  if (out.empty()) throw ParseError(source_name + ": distribution has no positive mass");
  return out;
}

DiscreteDistribution read_distribution_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open distribution file '" + path + "'");
  return parse_distribution_csv(in, path);
}

}  // namespace csort
