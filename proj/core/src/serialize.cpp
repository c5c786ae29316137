#include "csort/serialize.hpp"

#include <algorithm>
#include <cmath>

#include "csort/errors.hpp"
#include "json.hpp"

namespace csort {

namespace {

using json = nlohmann::ordered_json;

std::string dump(const json& j, int indent) { return j.dump(indent < 0 ? -1 : indent); }

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

const json& field(const json& obj, const char* name, const char* what) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ParseError(std::string(what) + ": missing field '" + name + "'");
  }
  return obj.at(name);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": expected a finite number");
  return v;
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

json distribution_json(const DiscreteDistribution& d) {
  json atoms = json::array();
  for (const Atom& a : d.atoms()) atoms.push_back(json{{"skill", a.skill}, {"mass", a.mass}});
  return atoms;
}

DiscreteDistribution distribution_from(const json& atoms, std::int64_t scale, const char* side) {
  if (!atoms.is_array()) throw ParseError(std::string("economy: '") + side + "' must be an array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string where = std::string("economy: ") + side + "[" + std::to_string(i) + "]";
    out.push_back({number(field(atoms[i], "skill", where.c_str()), where + ".skill"),
                   integer(field(atoms[i], "mass", where.c_str()), where + ".mass")});
  }
  return DiscreteDistribution(std::move(out), scale);
}

TabulatedFunction table_from(const json& knots, const char* name) {
  if (!knots.is_array() || knots.empty()) {
    throw ParseError(std::string("economy: '") + name + "' must be a non-empty array of [x,y]");
  }
  std::vector<TabulatedFunction::Knot> out;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const std::string where = std::string("economy: ") + name + "[" + std::to_string(i) + "]";
    if (!knots[i].is_array() || knots[i].size() != 2) throw ParseError(where + ": expected [x,y]");
    out.push_back({number(knots[i][0], where), number(knots[i][1], where)});
  }
  return TabulatedFunction(std::move(out), TabulatedFunction::Extrapolation::kClamp);
}

json params_json(const PowerCostParams& p) {
  return json{{"zeta_p", p.zeta_p}, {"rho_p", p.rho_p}, {"zeta_k", p.zeta_k}, {"rho_k", p.rho_k}};
}

json skill_map(const DualSolution& dual, double DualPoint::*member) {
  json out = json::object();
  for (const DualPoint& p : dual.points) out[format_skill(p.skill)] = p.*member;
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string assignment_to_json(const Assignment& assignment, const MismatchCost& cost, int indent) {
  json pairs = json::array();
  for (const auto& p : assignment.pairs) {
    pairs.push_back(json{{"x", p.x}, {"z", p.z}, {"mass", p.mass}, {"unit_cost", cost(p.x, p.z)}});
  }
  return dump(json{{"scale", assignment.scale},
                   {"pairs", std::move(pairs)},
                   {"total_cost", assignment.total_cost}},
              indent);
}

Assignment assignment_from_json(const std::string& text, const MismatchCost& cost) {
  const json j = parse(text, "assignment");
  const std::int64_t scale = integer(field(j, "scale", "assignment"), "assignment.scale");
  if (scale <= 0) throw ParseError("assignment.scale must be positive");
  const json& pairs = field(j, "pairs", "assignment");
  if (!pairs.is_array()) throw ParseError("assignment.pairs must be an array");
  std::vector<AssignedPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string where = "assignment.pairs[" + std::to_string(i) + "]";
    const json& p = pairs[i];
    AssignedPair q{number(field(p, "x", where.c_str()), where + ".x"),
                   number(field(p, "z", where.c_str()), where + ".z"),
                   integer(field(p, "mass", where.c_str()), where + ".mass")};
    if (q.mass <= 0) throw ParseError(where + ".mass must be positive");
    out.push_back(q);
  }
  return make_assignment(std::move(out), scale, cost);
}

std::string layers_to_json(const std::vector<Layer>& layers, int indent) {
  json out = json::array();
  for (const Layer& layer : layers) {
    json points = json::array();
    for (const LayerPoint& p : layer.points) {
      points.push_back(json{{"skill", p.skill}, {"side", to_string(p.side)}});
    }
    out.push_back(json{{"mass", layer.mass},
                       {"points", std::move(points)},
                       {"band", json::array({layer.band_lo, layer.band_hi})}});
  }
  return dump(out, indent);
}

std::string dual_to_json(const DualSolution& dual, double gap, int indent) {
  return dump(json{{"phi", skill_map(dual, &DualPoint::phi)},
                   {"w", skill_map(dual, &DualPoint::w)},
                   {"v", skill_map(dual, &DualPoint::v)},
                   {"gap", gap}},
              indent);
}

DualSolution dual_from_json(const std::string& text) {
  const json j = parse(text, "dual");
  const json& phi = field(j, "phi", "dual");
  const json& w = field(j, "w", "dual");
  const json& v = field(j, "v", "dual");
  if (!phi.is_object() || !w.is_object() || !v.is_object()) {
    throw ParseError("dual: phi, w and v must be objects keyed by skill");
  }
  DualSolution out;
  for (const auto& [key, value] : phi.items()) {
    double skill = 0.0;
    try {
      std::size_t used = 0;
      skill = std::stod(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParseError("dual.phi: key '" + key + "' is not a skill");
    }
    if (!w.contains(key) || !v.contains(key)) {
      throw ParseError("dual: skill " + key + " is missing from w or v");
    }
    const double f = number(value, "dual.phi." + key);
    out.points.push_back({skill, f, -f, number(w.at(key), "dual.w." + key),
                          number(v.at(key), "dual.v." + key)});
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const DualPoint& a, const DualPoint& b) { return a.skill < b.skill; });
  return out;
}

std::string dispersion_to_json(const DispersionReport& report, const std::string& label,
                               int indent) {
  json jobs = json::array();
  for (const auto& j : report.per_job) {
    jobs.push_back(json{{"z", j.z},
                        {"occupation", j.occupation},
                        {"worker_types", j.worker_types},
                        {"mean_wage", j.mean_wage},
                        {"mean_log_wage", j.mean_log_wage},
                        {"var_log_wage", j.var_log_wage},
                        {"mad_log_wage", j.mad_log_wage},
                        {"employment_share", j.employment_share}});
  }
  json occupations = json::array();
  for (const auto& o : report.occupations) {
    occupations.push_back(json{{"label", o.label},
                               {"job_skills", o.job_skills},
                               {"rank", o.rank},
                               {"worker_types", o.worker_types},
                               {"mean_wage", o.mean_wage},
                               {"mean_log_wage", o.mean_log_wage},
                               {"var_log_wage", o.var_log_wage},
                               {"mad_log_wage", o.mad_log_wage},
                               {"employment_share", o.employment_share}});
  }
  json segments = json::object();
  for (const auto& s : report.segments) {
    segments[s.segment.name] = json{{"rank", json::array({s.segment.lo, s.segment.hi})},
                                    {"employment_share", s.employment_share},
                                    {"var_log_wage", s.var_log_wage},
                                    {"mad_log_wage", s.mad_log_wage},
                                    {"explained_sq", optional_number(s.explained_sq)},
                                    {"explained_abs", optional_number(s.explained_abs)}};
  }
  return dump(json{{"label", label},
                   {"per_job", std::move(jobs)},
                   {"occupations", std::move(occupations)},
                   {"segments", std::move(segments)},
                   {"warnings", report.warnings}},
              indent);
}

EconomyFixture economy_from_json(const std::string& text) {
  const json j = parse(text, "economy");
  std::int64_t scale = 1;
  if (j.contains("scale")) scale = integer(j.at("scale"), "economy.scale");
  if (scale <= 0) throw ParseError("economy.scale must be positive");
  DiscreteDistribution workers = distribution_from(field(j, "workers", "economy"), scale, "workers");
  DiscreteDistribution jobs = distribution_from(field(j, "jobs", "economy"), scale, "jobs");

  PowerCostParams params;
  if (j.contains("cost")) {
    const json& c = j.at("cost");
    if (c.contains("B_p")) {
      TechnologyPrimitives t{number(field(c, "B_p", "economy.cost"), "economy.cost.B_p"),
                             number(field(c, "eta_p", "economy.cost"), "economy.cost.eta_p"),
                             number(field(c, "B_k", "economy.cost"), "economy.cost.B_k"),
                             number(field(c, "eta_k", "economy.cost"), "economy.cost.eta_k")};
      params = power_params_from_primitives(t);
    } else {
      params = {number(field(c, "zeta_p", "economy.cost"), "economy.cost.zeta_p"),
                number(field(c, "rho_p", "economy.cost"), "economy.cost.rho_p"),
                number(field(c, "zeta_k", "economy.cost"), "economy.cost.zeta_k"),
                number(field(c, "rho_k", "economy.cost"), "economy.cost.rho_k")};
    }
  }
  MismatchCost cost = MismatchCost::power(params);

  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto* d : {&workers, &jobs}) {
    for (const Atom& a : d->atoms()) {
      lo = any ? std::min(lo, a.skill) : a.skill;
      hi = any ? std::max(hi, a.skill) : a.skill;
      any = true;
    }
  }
  EconomyFixture out{std::move(workers), std::move(jobs), default_production(lo, hi, cost),
                     j.value("label", std::string("economy"))};
  if (j.contains("g")) out.spec.g = table_from(j.at("g"), "g");
  if (j.contains("h")) out.spec.h = table_from(j.at("h"), "h");
  out.validate();
  return out;
}

std::string economy_to_json(const DiscreteDistribution& workers, const DiscreteDistribution& jobs,
                            const PowerCostParams& params, const std::string& label, int indent) {
  const ScaledPair p = to_common_scale(workers, jobs);
  return dump(json{{"label", label},
                   {"scale", p.workers.scale()},
                   {"workers", distribution_json(p.workers)},
                   {"jobs", distribution_json(p.jobs)},
                   {"cost", params_json(params)}},
              indent);
}

std::string trial_to_json(const TrialOutcome& outcome, int indent) {
  json messages = json::array();
  for (const auto& m : outcome.assignment.messages) messages.push_back(m);
  for (const auto& m : outcome.duality.messages) messages.push_back(m);
  return dump(json{{"ok", outcome.ok()},
                   {"error", outcome.error},
                   {"solver_cost", outcome.solver_cost},
                   {"oracle_cost", outcome.oracle_cost},
                   {"cost_ok", outcome.cost_ok},
                   {"assignment_ok", outcome.assignment.ok()},
                   {"duality_ok", outcome.duality.ok()},
                   {"worst_feasibility", outcome.duality.worst_feasibility},
                   {"worst_slackness", outcome.duality.worst_slackness},
                   {"gap", outcome.duality.gap},
                   {"messages", std::move(messages)}},
              indent);
}

}  // namespace csort
