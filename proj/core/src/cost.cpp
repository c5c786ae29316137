#include "csort/cost.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csort/errors.hpp"

namespace csort {

PowerCostParams PowerCostParams::symmetric(double zeta, double rho) {
  PowerCostParams p{zeta, rho, zeta, rho};
  p.validate();
  return p;
}

void PowerCostParams::validate() const {
  auto check_zeta = [](double z, const char* name) {
    if (!(z > 0.0 && z < 1.0)) {
      throw DomainError(std::string(name) + " must lie in (0,1), got " + std::to_string(z));
    }
  };
  auto check_rho = [](double r, const char* name) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw DomainError(std::string(name) + " must be positive, got " + std::to_string(r));
    }
  };
  check_zeta(zeta_p, "zeta_p");
  check_zeta(zeta_k, "zeta_k");
  check_rho(rho_p, "rho_p");
  check_rho(rho_k, "rho_k");
}

void TechnologyPrimitives::validate() const {
  const std::pair<double, const char*> fields[] = {
      {B_p, "B_p"}, {eta_p, "eta_p"}, {B_k, "B_k"}, {eta_k, "eta_k"}};
  for (const auto& [value, name] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DomainError(std::string(name) + " must be positive, got " +
                        std::to_string(value));
    }
  }
}

PowerCostParams power_params_from_primitives(const TechnologyPrimitives& t) {
  t.validate();
  auto side = [](double B, double eta) {
    const double zeta = eta / (1.0 + eta);
    return std::pair{zeta, std::pow(B, 1.0 / (1.0 + eta)) / zeta};
  };
  const auto [zp, rp] = side(t.B_p, t.eta_p);
  const auto [zk, rk] = side(t.B_k, t.eta_k);
  return PowerCostParams{zp, rp, zk, rk};
}

double mismatch_cost(const PowerCostParams& p, double worker, double job) {
  if (job >= worker) {
    return job == worker ? 0.0 : p.rho_p * std::pow(job - worker, p.zeta_p);
  }
  return p.rho_k * std::pow(worker - job, p.zeta_k);
}

Investment optimal_investment(const TechnologyPrimitives& t, double worker, double job) {
  t.validate();
  if (worker == job) {
    throw InvestmentUndefined("no mismatch at skill " + std::to_string(worker) +
                              ": investment is unbounded");
  }
  const bool under = job > worker;
  const double B = under ? t.B_p : t.B_k;
  const double eta = under ? t.eta_p : t.eta_k;
  const double d = std::abs(job - worker);
  const double gamma = std::pow(d / B, -1.0 / (1.0 + eta));
  return {gamma, (B / eta) * std::pow(gamma, -eta)};
}

LegendreCost::LegendreCost(std::function<double(double)> psi)
    : LegendreCost(std::move(psi), Options{}) {}

LegendreCost::LegendreCost(std::function<double(double)> psi, Options options)
    : psi_(std::move(psi)), options_(options) {
  if (!psi_) throw InvalidCost("investment schedule is empty");
  if (!(options_.gamma_min > 0.0 && options_.gamma_max > options_.gamma_min)) {
    throw InvalidCost("gamma search range must satisfy 0 < gamma_min < gamma_max");
  }
  if (options_.grid_points < 3 || options_.validation_points < 3) {
    throw InvalidCost("gamma grids need at least 3 points");
  }
  const int n = options_.validation_points;
  const double log_lo = std::log(options_.gamma_min);
  const double log_hi = std::log(options_.gamma_max);
  std::vector<double> g(n), v(n);
  for (int i = 0; i < n; ++i) {
    g[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
    v[i] = psi_(g[i]);
    if (!std::isfinite(v[i])) {
      throw InvalidCost("investment schedule is not finite at gamma=" + std::to_string(g[i]));
    }
  }
  double previous_slope = -INFINITY;
  for (int i = 0; i + 1 < n; ++i) {
    const double slope = (v[i + 1] - v[i]) / (g[i + 1] - g[i]);
    if (!(slope < 0.0)) {
      throw InvalidCost("investment schedule is not strictly decreasing near gamma=" +
                        std::to_string(g[i]));
    }
    if (!(slope > previous_slope)) {
      throw InvalidCost("investment schedule is not strictly convex near gamma=" +
                        std::to_string(g[i]));
    }
    previous_slope = slope;
  }
}

double LegendreCost::argmin(double d) const {
  auto objective = [&](double gamma) { return gamma * d + psi_(gamma); };
  const int n = options_.grid_points;
  const double log_lo = std::log(options_.gamma_min);
  const double log_hi = std::log(options_.gamma_max);
  auto grid = [&](int i) { return std::exp(log_lo + (log_hi - log_lo) * i / (n - 1)); };

  int best = 0;
  double best_value = objective(grid(0));
  for (int i = 1; i < n; ++i) {
    const double v = objective(grid(i));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = grid(std::max(best - 1, 0));
  double b = grid(std::min(best + 1, n - 1));

  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double e = a + kInvPhi * (b - a);
  double fc = objective(c);
  double fe = objective(e);
  for (int iter = 0; iter < 500; ++iter) {
    if (b - a <= options_.tolerance * std::max(1.0, std::abs(c))) break;
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - kInvPhi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + kInvPhi * (b - a);
      fe = objective(e);
    }
  }
  return 0.5 * (a + b);
}

double legendre_cost(const LegendreCost& cost, double d) {
  if (!(d >= 0.0)) throw DomainError("mismatch must be non-negative, got " + std::to_string(d));
  if (d == 0.0) return 0.0;
  const double gamma = cost.argmin(d);
  return gamma * d + cost.psi(gamma);
}

MismatchCost MismatchCost::power(PowerCostParams params) {
  params.validate();
  return MismatchCost(params);
}

MismatchCost MismatchCost::legendre(LegendreCost underqualified, LegendreCost overqualified) {
  return MismatchCost(LegendrePair{
      std::make_shared<const LegendreCost>(std::move(underqualified)),
      std::make_shared<const LegendreCost>(std::move(overqualified))});
}

MismatchCost MismatchCost::of_mismatch(std::function<double(double)> h, std::string name) {
  if (!h) throw InvalidCost("mismatch cost function is empty");
  return MismatchCost(Custom{std::move(h), std::move(name)});
}

double MismatchCost::operator()(double worker, double job) const {
  if (const auto* p = std::get_if<PowerCostParams>(&impl_)) {
    return mismatch_cost(*p, worker, job);
  }
  if (const auto* l = std::get_if<LegendrePair>(&impl_)) {
    return job >= worker ? legendre_cost(*l->under, job - worker)
                         : legendre_cost(*l->over, worker - job);
  }
  return std::get<Custom>(impl_).h(job - worker);
}

const PowerCostParams* MismatchCost::power_params() const {
  return std::get_if<PowerCostParams>(&impl_);
}

std::string MismatchCost::describe() const {
  std::ostringstream os;
  if (const auto* p = std::get_if<PowerCostParams>(&impl_)) {
    os << "power(zeta_p=" << p->zeta_p << ", rho_p=" << p->rho_p
       << ", zeta_k=" << p->zeta_k << ", rho_k=" << p->rho_k << ")";
  } else if (std::holds_alternative<LegendrePair>(impl_)) {
    os << "legendre";
  } else {
    os << std::get<Custom>(impl_).name;
  }
  return os.str();
}

TabulatedFunction::TabulatedFunction(std::vector<Knot> knots, Extrapolation mode)
    : knots_(std::move(knots)), mode_(mode) {
  if (knots_.empty()) throw DomainError("tabulated function needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].x) || !std::isfinite(knots_[i].y)) {
      throw DomainError("tabulated function knots must be finite");
    }
    if (i > 0 && !(knots_[i].x > knots_[i - 1].x)) {
      throw DomainError("tabulated function abscissae must be strictly increasing");
    }
  }
}

TabulatedFunction TabulatedFunction::identity(double lo, double hi) {
  return affine(lo, hi, 0.0, 1.0);
}

TabulatedFunction TabulatedFunction::affine(double lo, double hi, double intercept,
                                            double slope) {
  if (lo == hi) return TabulatedFunction({{lo, intercept + slope * lo}});
  return TabulatedFunction({{lo, intercept + slope * lo}, {hi, intercept + slope * hi}});
}

double TabulatedFunction::operator()(double x) const {
  if (knots_.empty()) throw DomainError("evaluating an empty tabulated function");
  if (x < knots_.front().x || x > knots_.back().x) {
    if (mode_ == Extrapolation::kThrow) {
      std::ostringstream msg;
      msg << "skill " << x << " outside tabulated domain [" << knots_.front().x << ", "
          << knots_.back().x << "]";
      throw DomainError(msg.str());
    }
    return x < knots_.front().x ? knots_.front().y : knots_.back().y;
  }
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                             [](const Knot& k, double v) { return k.x < v; });
  if (it->x == x) return it->y;
  const Knot& hi = *it;
  const Knot& lo = *std::prev(it);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

bool TabulatedFunction::nondecreasing() const {
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].y < knots_[i - 1].y) return false;
  }
  return true;
}

bool TabulatedFunction::monotone() const {
  if (nondecreasing()) return true;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].y > knots_[i - 1].y) return false;
  }
  return true;
}

void ProductionSpec::validate() const {
  if (!g.nondecreasing()) throw DomainError("worker output g must be nondecreasing");
  if (!h.monotone()) throw DomainError("job output h must be monotone");
}

double effective_output(const ProductionSpec& spec, double worker, double job) {
  return spec.g(worker) + spec.h(job) - spec.cost(worker, job);
}

}  // namespace csort
