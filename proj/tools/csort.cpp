// csort: composite sorting solver front end.
//
//   csort solve   --workers f.csv --jobs g.csv [cost flags] [--method M] [--out a.json]
//   csort layers  --workers f.csv --jobs g.csv
//   csort dual    --assignment a.json [cost flags] [--economy e.json]
//   csort verify  --trials N --seed S --max-atoms K
//   csort verify  --assignment a.json --workers f.csv --jobs g.csv [--dual d.json]
//   csort quant   --preset regions [--wage-percentiles wp.csv] [--occupation-map occ.csv]
//   csort example --name reflecting-binomial|mixture|dual-worked
//
// Exit status: 0 success, 1 validation failure, 2 internal invariant violation.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "csort/cost.hpp"
#include "csort/distributions.hpp"
#include "csort/dual.hpp"
#include "csort/errors.hpp"
#include "csort/layering.hpp"
#include "csort/oracle.hpp"
#include "csort/quant.hpp"
#include "csort/serialize.hpp"
#include "csort/solver.hpp"
#include "json.hpp"

namespace {

using namespace csort;
using ojson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInternal = 2;

struct CostFlags {
  std::optional<double> zeta_p, rho_p, zeta_k, rho_k;
  std::optional<double> B_p, eta_p, B_k, eta_k;

  bool power_given() const { return zeta_p || rho_p || zeta_k || rho_k; }
  bool primitives_given() const { return B_p || eta_p || B_k || eta_k; }
  bool any() const { return power_given() || primitives_given(); }
};

void add_cost_flags(CLI::App* app, CostFlags& f) {
  auto* zp = app->add_option("--zeta-p", f.zeta_p, "underqualification exponent in (0,1)");
  auto* rp = app->add_option("--rho-p", f.rho_p, "underqualification scale, > 0");
  auto* zk = app->add_option("--zeta-k", f.zeta_k, "overqualification exponent in (0,1)");
  auto* rk = app->add_option("--rho-k", f.rho_k, "overqualification scale, > 0");
  auto* bp = app->add_option("--B-p", f.B_p, "technology investment scale");
  auto* ep = app->add_option("--eta-p", f.eta_p, "technology investment elasticity");
  auto* bk = app->add_option("--B-k", f.B_k, "amenity investment scale");
  auto* ek = app->add_option("--eta-k", f.eta_k, "amenity investment elasticity");
  for (auto* a : {zp, rp, zk, rk}) {
    a->group("Cost (power form)");
    for (auto* b : {bp, ep, bk, ek}) a->excludes(b);
  }
  for (auto* b : {bp, ep, bk, ek}) b->group("Cost (investment primitives)");
}

// A side left unspecified mirrors the other one; nothing at all gives the
// symmetric square root cost.
PowerCostParams resolve_params(const CostFlags& f, const PowerCostParams& fallback) {
  if (f.primitives_given()) {
    const bool p_side = f.B_p || f.eta_p;
    const bool k_side = f.B_k || f.eta_k;
    TechnologyPrimitives t;
    t.B_p = f.B_p.value_or(p_side ? 1.0 : f.B_k.value_or(1.0));
    t.eta_p = f.eta_p.value_or(p_side ? 1.0 : f.eta_k.value_or(1.0));
    t.B_k = f.B_k.value_or(k_side ? 1.0 : t.B_p);
    t.eta_k = f.eta_k.value_or(k_side ? 1.0 : t.eta_p);
    return power_params_from_primitives(t);
  }
  if (!f.power_given()) return fallback;
  const bool p_side = f.zeta_p || f.rho_p;
  const bool k_side = f.zeta_k || f.rho_k;
  PowerCostParams p;
  p.zeta_p = f.zeta_p.value_or(p_side ? 0.5 : f.zeta_k.value_or(0.5));
  p.rho_p = f.rho_p.value_or(p_side ? 1.0 : f.rho_k.value_or(1.0));
  p.zeta_k = f.zeta_k.value_or(k_side ? 0.5 : p.zeta_p);
  p.rho_k = f.rho_k.value_or(k_side ? 1.0 : p.rho_p);
  p.validate();
  return p;
}

struct InputFlags {
  std::string workers;
  std::string jobs;
  std::string economy;
  std::string preset;
};

void add_input_flags(CLI::App* app, InputFlags& f, bool with_presets) {
  auto* w = app->add_option("--workers", f.workers, "worker distribution CSV (skill,mass)");
  auto* j = app->add_option("--jobs", f.jobs, "job distribution CSV (skill,mass)");
  auto* e = app->add_option("--economy", f.economy, "economy fixture JSON");
  e->excludes(w)->excludes(j);
  if (with_presets) {
    auto* p = app->add_option("--preset", f.preset, "built-in economy")
                  ->check(CLI::IsMember({"reflecting-binomial", "mixture", "regions", "regions-base"}));
    p->excludes(w)->excludes(j)->excludes(e);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  return in;
}

double span_lo(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  double lo = INFINITY;
  for (const auto* d : {&a, &b}) {
    if (!d->empty()) lo = std::min(lo, d->atoms().front().skill);
  }
  return std::isfinite(lo) ? lo : 0.0;
}

double span_hi(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  double hi = -INFINITY;
  for (const auto* d : {&a, &b}) {
    if (!d->empty()) hi = std::max(hi, d->atoms().back().skill);
  }
  return std::isfinite(hi) ? hi : 0.0;
}

// The economy named by the input flags, with the cost flags applied on top of
// any cost stored in a fixture file.
EconomyFixture load_economy(const InputFlags& in, const CostFlags& cost_flags) {
  const PowerCostParams defaults{};
  if (!in.preset.empty()) {
    const MismatchCost cost = MismatchCost::power(resolve_params(cost_flags, defaults));
    if (in.preset == "reflecting-binomial") return reflecting_binomial_preset(cost);
    if (in.preset == "mixture") return mixture_preset(cost);
    return regions_preset(cost, in.preset == "regions");
  }
  if (!in.economy.empty()) {
    EconomyFixture e = economy_from_json(read_file(in.economy));
    if (cost_flags.any()) {
      const PowerCostParams* stored = e.spec.cost.power_params();
      e.spec.cost = MismatchCost::power(resolve_params(cost_flags, stored ? *stored : defaults));
    }
    return e;
  }
  if (in.workers.empty() && in.jobs.empty()) {
    throw ParamError("no input: give --workers and --jobs, --economy or --preset");
  }
  if (in.workers.empty()) throw ParamError("--workers is required when --jobs is given");
  if (in.jobs.empty()) throw ParamError("--jobs is required when --workers is given");
  auto wf = open_file(in.workers);
  auto jf = open_file(in.jobs);
  DiscreteDistribution workers = parse_distribution_csv(wf, in.workers);
  DiscreteDistribution jobs = parse_distribution_csv(jf, in.jobs);
  const double lo = span_lo(workers, jobs);
  const double hi = span_hi(workers, jobs);
  const MismatchCost cost = MismatchCost::power(resolve_params(cost_flags, defaults));
  return {std::move(workers), std::move(jobs), default_production(lo, hi, cost), "csv"};
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParamError("cannot write --out file '" + path + "'");
  out << text << '\n';
}

enum class Method { kSimple, kEfficient, kLayeredPositive, kConvexPam };

Method parse_method(const std::string& m) {
  if (m == "simple") return Method::kSimple;
  if (m == "efficient") return Method::kEfficient;
  if (m == "layered-positive") return Method::kLayeredPositive;
  return Method::kConvexPam;
}

Assignment run_method(const EconomyFixture& e, Method method, unsigned threads) {
  switch (method) {
    case Method::kLayeredPositive:
      return layered_positive(e.workers, e.jobs, e.spec.cost);
    case Method::kConvexPam:
      return positive_sorting_convex(e.workers, e.jobs, e.spec.cost);
    default: {
      SolveOptions options;
      options.method = method == Method::kSimple ? BellmanMethod::kSimple : BellmanMethod::kEfficient;
      options.threads = threads;
      return solve(e.workers, e.jobs, e.spec.cost, options);
    }
  }
}

void add_method_flag(CLI::App* app, std::string& method) {
  app->add_option("--method", method, "assignment method")
      ->check(CLI::IsMember({"simple", "efficient", "layered-positive", "convex-pam"}))
      ->capture_default_str();
}

int cmd_solve(const InputFlags& in, const CostFlags& cf, const std::string& method,
              unsigned threads, const std::string& out) {
  const EconomyFixture e = load_economy(in, cf);
  const Assignment a = run_method(e, parse_method(method), threads);
  emit(assignment_to_json(a, e.spec.cost), out);
  return kExitOk;
}

int cmd_layers(const InputFlags& in, const CostFlags& cf, const std::string& out) {
  const EconomyFixture e = load_economy(in, cf);
  const CommonSplit split = common_component(e.workers, e.jobs);
  emit(layers_to_json(decompose_layers(split.workers_rem, split.jobs_rem)), out);
  return kExitOk;
}

ProductionSpec production_for(const Assignment& a, const InputFlags& in, const CostFlags& cf) {
  if (!in.economy.empty() || !in.preset.empty() || !in.workers.empty() || !in.jobs.empty()) {
    return load_economy(in, cf).spec;
  }
  const DiscreteDistribution workers = a.worker_marginal();
  const DiscreteDistribution jobs = a.job_marginal();
  return default_production(span_lo(workers, jobs), span_hi(workers, jobs),
                            MismatchCost::power(resolve_params(cf, PowerCostParams{})));
}

int cmd_dual(const std::string& assignment_path, const InputFlags& in, const CostFlags& cf,
             const std::string& out) {
  const std::string text = read_file(assignment_path);
  // Parse once with a placeholder cost to learn the support.
  const Assignment probe =
      assignment_from_json(text, MismatchCost::power(resolve_params(cf, PowerCostParams{})));
  const ProductionSpec spec = production_for(probe, in, cf);
  const Assignment a = assignment_from_json(text, spec.cost);
  const DualReport report = construct_duals(a, spec);
  emit(dual_to_json(report.dual, report.gap), out);
  return kExitOk;
}

int cmd_verify_random(std::size_t trials, std::uint64_t seed, std::size_t max_atoms,
                      std::size_t min_atoms, const std::string& out) {
  if (min_atoms < 1 || max_atoms < min_atoms) {
    throw ParamError("--max-atoms must be at least --min-atoms, and both positive");
  }
  if (max_atoms > kMatchingLimit) {
    throw ParamError("--max-atoms exceeds the matching oracle limit of " +
                     std::to_string(kMatchingLimit));
  }
  std::mt19937_64 rng(seed);
  RandomInstanceOptions options;
  options.min_units = min_atoms;
  options.max_units = max_atoms;
  const auto start = std::chrono::steady_clock::now();
  std::size_t failures = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomInstance inst = random_instance(rng, options);
    const MismatchCost cost = MismatchCost::power(inst.params);
    for (const BellmanMethod m : {BellmanMethod::kEfficient, BellmanMethod::kSimple}) {
      const TrialOutcome outcome = run_trial(inst.workers, inst.jobs, cost, m);
      if (outcome.ok()) continue;
      ++failures;
      std::cerr << "trial " << t << " failed ("
                << (m == BellmanMethod::kSimple ? "simple" : "efficient") << ")\n"
                << "instance: "
                << economy_to_json(inst.workers, inst.jobs, inst.params,
                                   "trial-" + std::to_string(t), -1)
                << "\noutcome: " << trial_to_json(outcome, -1) << '\n';
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ojson summary{{"trials", trials},
                {"seed", seed},
                {"max_atoms", max_atoms},
                {"failures", failures},
                {"seconds", seconds}};
  emit(summary.dump(2), out);
  return failures == 0 ? kExitOk : kExitInvalid;
}

int cmd_verify_assignment(const std::string& assignment_path, const std::string& dual_path,
                          const InputFlags& in, const CostFlags& cf, const std::string& out) {
  const EconomyFixture e = load_economy(in, cf);
  const Assignment a = assignment_from_json(read_file(assignment_path), e.spec.cost);
  const AssignmentCheck ac = check_assignment(a, e.workers, e.jobs, e.spec.cost);
  DualSolution dual;
  if (dual_path.empty()) {
    dual = construct_duals(a, e.spec).dual;
  } else {
    dual = dual_from_json(read_file(dual_path));
  }
  const DualityCheck dc = check_duality(dual, a, e.spec);
  ojson messages = ojson::array();
  for (const auto& m : ac.messages) messages.push_back(m);
  for (const auto& m : dc.messages) messages.push_back(m);
  const bool ok = ac.ok() && dc.ok();
  ojson report{{"ok", ok},
               {"marginal_mismatch", ac.marginal_mismatch},
               {"intersecting_pairs", ac.intersecting_pairs},
               {"submaximal_diagonal", ac.submaximal_diagonal},
               {"cost_mismatch", ac.cost_mismatch},
               {"infeasible", dc.infeasible},
               {"slack_on_support", dc.slack_on_support},
               {"gap_exceeded", dc.gap_exceeded},
               {"worst_feasibility", dc.worst_feasibility},
               {"worst_slackness", dc.worst_slackness},
               {"gap", dc.gap},
               {"messages", std::move(messages)}};
  emit(report.dump(2), out);
  return ok ? kExitOk : kExitInvalid;
}

struct QuantFlags {
  std::string wage_percentiles;
  std::string occupation_map;
  std::string data_dispersion;
  std::string plot;
};

int cmd_quant(const InputFlags& in, const CostFlags& cf, const std::string& method,
              unsigned threads, const QuantFlags& q, const std::string& out) {
  EconomyFixture e = load_economy(in, cf);
  if (!q.wage_percentiles.empty()) {
    auto f = open_file(q.wage_percentiles);
    e.spec.g = wages_on_skills(e.workers,
                               calibrate_g(parse_wage_percentiles_csv(f, q.wage_percentiles)));
  }
  e.validate();
  DispersionOptions options;
  if (!q.occupation_map.empty()) {
    auto f = open_file(q.occupation_map);
    options.occupation_map = parse_occupation_map_csv(f, q.occupation_map);
  }
  if (!q.data_dispersion.empty()) {
    auto f = open_file(q.data_dispersion);
    options.data = parse_data_dispersion_csv(f, q.data_dispersion);
  }
  const Method m = parse_method(method);
  const Assignment a = run_method(e, m, threads);
  DispersionReport report;
  if (m == Method::kSimple || m == Method::kEfficient) {
    report = dispersion_report(e, a, construct_duals(a, e.spec).dual, options);
  } else {
    report = dispersion_report(e, a, output_wages(e), options);
    report.warnings.push_back("comparator assignment: wages are g without mismatch rents");
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  emit(dispersion_to_json(report, e.label), out);

  std::string plot = q.plot;
  if (plot.empty() && !out.empty() && out != "-") {
    const auto dot = out.rfind('.');
    plot = (dot == std::string::npos ? out : out.substr(0, dot)) + "_plot.csv";
  }
  if (!plot.empty()) {
    std::ofstream f(plot);
    if (!f) throw ParamError("cannot write --plot file '" + plot + "'");
    write_plot_csv(f, report);
  }
  return kExitOk;
}

ojson distribution_json(const DiscreteDistribution& d) {
  ojson atoms = ojson::array();
  for (const Atom& a : d.atoms()) atoms.push_back(ojson{{"skill", a.skill}, {"mass", a.mass}});
  return atoms;
}

ojson pairs_json(const Assignment& a) {
  ojson out = ojson::array();
  for (const auto& p : a.pairs) out.push_back(ojson{{"x", p.x}, {"z", p.z}, {"mass", p.mass}});
  return out;
}

ojson example_binomial(const std::string& name) {
  const MismatchCost cost = MismatchCost::power(PowerCostParams::symmetric(0.5, 1.0));
  const EconomyFixture e =
      name == "mixture" ? mixture_preset(cost) : reflecting_binomial_preset(cost);
  const Assignment a = solve(e.workers, e.jobs, cost);
  ojson expected;
  if (name == "mixture") {
    expected = {{"diagonal", {16, 8, 24, 8, 16}},
                {"mismatched", ojson::array({ojson{{"x", 1}, {"z", 0}, {"mass", 12}},
                                             ojson{{"x", 1}, {"z", 3}, {"mass", 12}},
                                             ojson{{"x", 4}, {"z", 3}, {"mass", 12}}})}};
  } else {
    expected = {{"diagonal", {1, 8, 24, 8, 1}},
                {"mismatched", ojson::array({ojson{{"x", 0}, {"z", 4}, {"mass", 15}},
                                             ojson{{"x", 1}, {"z", 3}, {"mass", 24}}})}};
  }
  return ojson{{"name", name},
               {"scale", e.workers.scale()},
               {"workers", distribution_json(e.workers)},
               {"jobs", distribution_json(e.jobs)},
               {"cost", cost.describe()},
               {"expected", std::move(expected)},
               {"assignment", pairs_json(a)}};
}

ojson example_dual() {
  const MismatchCost cost =
      MismatchCost::of_mismatch([](double d) { return std::sqrt(std::abs(d)); }, "sqrt|z-x|");
  const double x[] = {1, 3, 7};
  const double z[] = {10, 4, 8};
  std::vector<AssignedPair> pairs;
  for (int i = 0; i < 3; ++i) pairs.push_back({x[i], z[i], 1});
  const Assignment a = make_assignment(pairs, 1, cost);
  const SubpairForest forest = build_subpair_forest(a);
  const LocalPotentials local = local_potentials(forest, cost);
  const BetaSystem beta({pairs[1], pairs[2]}, pairs[0], cost);
  const double s3 = std::sqrt(3.0);
  ojson computed = ojson::object();
  ojson expected = ojson::object();
  const char* names[] = {"x1", "z1", "x2", "z2", "x0", "z0"};
  const double skills[] = {3, 4, 7, 8, 1, 10};
  const double reference[] = {5 - 2 * s3, 4 - 2 * s3, 1, 0, 4 - s3, 1 - s3};
  for (int i = 0; i < 6; ++i) {
    computed[names[i]] = local.phi.at(skills[i]);
    expected[names[i]] = reference[i];
  }
  return ojson{{"name", "dual-worked"},
               {"x", {1, 3, 7}},
               {"z", {4, 8, 10}},
               {"pairs", pairs_json(a)},
               {"cost", cost.describe()},
               {"expected_phi", std::move(expected)},
               {"phi", std::move(computed)},
               {"beta2_interval", {beta.lower(1, 2), beta.upper(1, 2)}}};
}

int cmd_example(const std::string& name, const std::string& out) {
  ojson result;
  if (name.empty()) {
    result = ojson::array({example_binomial("reflecting-binomial"), example_binomial("mixture"),
                           example_dual()});
  } else if (name == "dual-worked") {
    result = example_dual();
  } else {
    result = example_binomial(name);
  }
  emit(result.dump(2), out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal assignment of workers to jobs under concave mismatch costs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "csort 0.1.0");

  std::string out;
  std::string method = "efficient";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "output path (default stdout)");
  };
  const auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "threads for per-layer solves")->capture_default_str();
  };

  InputFlags input;
  CostFlags cost_flags;

  auto* solve_cmd = app.add_subcommand("solve", "optimal assignment as JSON");
  add_input_flags(solve_cmd, input, true);
  add_cost_flags(solve_cmd, cost_flags);
  add_method_flag(solve_cmd, method);
  add_threads(solve_cmd);
  add_common(solve_cmd);

  auto* layers_cmd = app.add_subcommand("layers", "layer decomposition of the mismatched economy");
  add_input_flags(layers_cmd, input, true);
  add_common(layers_cmd);

  std::string assignment_path;
  auto* dual_cmd = app.add_subcommand("dual", "dual potentials and wages for an assignment");
  dual_cmd->add_option("--assignment", assignment_path, "assignment JSON from solve")->required();
  add_input_flags(dual_cmd, input, true);
  add_cost_flags(dual_cmd, cost_flags);
  add_common(dual_cmd);

  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t max_atoms = 12;
  std::size_t min_atoms = 2;
  std::string dual_path;
  auto* verify_cmd = app.add_subcommand(
      "verify", "randomized oracle checks, or certification of a given assignment");
  verify_cmd->add_option("--trials", trials, "random instances")->capture_default_str();
  verify_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  verify_cmd->add_option("--max-atoms", max_atoms, "largest instance in unit atoms")
      ->capture_default_str();
  verify_cmd->add_option("--min-atoms", min_atoms, "smallest instance in unit atoms")
      ->capture_default_str();
  verify_cmd->add_option("--assignment", assignment_path, "assignment JSON to certify");
  verify_cmd->add_option("--dual", dual_path, "dual JSON to check instead of rebuilding it");
  add_input_flags(verify_cmd, input, true);
  add_cost_flags(verify_cmd, cost_flags);
  add_common(verify_cmd);

  QuantFlags quant_flags;
  auto* quant_cmd = app.add_subcommand("quant", "within-job wage dispersion report");
  add_input_flags(quant_cmd, input, true);
  add_cost_flags(quant_cmd, cost_flags);
  add_method_flag(quant_cmd, method);
  add_threads(quant_cmd);
  quant_cmd->add_option("--wage-percentiles", quant_flags.wage_percentiles, "CSV rank,wage");
  quant_cmd->add_option("--occupation-map", quant_flags.occupation_map,
                        "CSV job_skill,occupation");
  quant_cmd->add_option("--data-dispersion", quant_flags.data_dispersion,
                        "CSV segment,var_log_wage,mad_log_wage");
  quant_cmd->add_option("--plot", quant_flags.plot, "plot data CSV path");
  add_common(quant_cmd);

  std::string example_name;
  auto* example_cmd = app.add_subcommand("example", "built-in fixtures and their expected output");
  example_cmd->add_option("--name", example_name, "fixture (default: all)")
      ->check(CLI::IsMember({"reflecting-binomial", "mixture", "dual-worked"}));
  add_common(example_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*solve_cmd) return cmd_solve(input, cost_flags, method, threads, out);
    if (*layers_cmd) return cmd_layers(input, cost_flags, out);
    if (*dual_cmd) return cmd_dual(assignment_path, input, cost_flags, out);
    if (*verify_cmd) {
      if (!assignment_path.empty()) {
        return cmd_verify_assignment(assignment_path, dual_path, input, cost_flags, out);
      }
      if (!dual_path.empty()) throw ParamError("--dual requires --assignment");
      return cmd_verify_random(trials, seed, max_atoms, min_atoms, out);
    }
    if (*quant_cmd) return cmd_quant(input, cost_flags, method, threads, quant_flags, out);
    if (*example_cmd) return cmd_example(example_name, out);
  } catch (const InternalInvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
