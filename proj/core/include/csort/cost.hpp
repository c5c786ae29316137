#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace csort {

// Asymmetric concave power cost: rho_p * (z - x)^zeta_p when the worker is
// underqualified (z >= x), rho_k * (x - z)^zeta_k when overqualified.
struct PowerCostParams {
  double zeta_p = 0.5;
  double rho_p = 1.0;
  double zeta_k = 0.5;
  double rho_k = 1.0;

  static PowerCostParams symmetric(double zeta, double rho);
  // Throws DomainError unless 0 < zeta < 1 and rho > 0 on both sides.
  void validate() const;
};

// Investment-cost primitives Psi(gamma) = (B / eta) * gamma^(-eta) for the
// technology (p) and amenity (k) channels.
struct TechnologyPrimitives {
  double B_p = 1.0;
  double eta_p = 1.0;
  double B_k = 1.0;
  double eta_k = 1.0;

  void validate() const;
};

// zeta = eta / (1 + eta), rho = B^(1 / (1 + eta)) / zeta on each side.
PowerCostParams power_params_from_primitives(const TechnologyPrimitives& t);

double mismatch_cost(const PowerCostParams& params, double worker, double job);

struct Investment {
  double gamma = 0.0;
  double fixed_cost = 0.0;
};

// First-order-condition investment level and its fixed cost Psi(gamma) on the
// side selected by the sign of job - worker. Throws InvestmentUndefined when
// worker == job.
Investment optimal_investment(const TechnologyPrimitives& t, double worker,
                              double job);

// Indirect cost C(d) = min_{gamma >= 0} gamma * d + Psi(gamma) of a strictly
// convex, strictly decreasing investment schedule Psi.
class LegendreCost {
 public:
  struct Options {
    double gamma_min = 1e-6;
    double gamma_max = 1e6;
    double tolerance = 1e-10;  // relative width of the final gamma bracket
    int grid_points = 400;     // log-spaced bracketing grid
    int validation_points = 64;
  };

  // Validates Psi on a log-spaced sample of [gamma_min, gamma_max]: first
  // differences must be negative and slopes strictly increasing. Throws
  // InvalidCost otherwise.
  explicit LegendreCost(std::function<double(double)> psi);
  LegendreCost(std::function<double(double)> psi, Options options);

  double psi(double gamma) const { return psi_(gamma); }
  const Options& options() const { return options_; }

  // Minimizing gamma for mismatch d > 0.
  double argmin(double d) const;

 private:
  std::function<double(double)> psi_;
  Options options_;
};

// C(d); C(0) = 0. Throws DomainError for d < 0.
double legendre_cost(const LegendreCost& cost, double d);

// Mismatch cost c(worker, job) used by every solver. Either the closed-form
// power cost, a pair of Legendre costs (underqualified, overqualified) or an
// arbitrary function of the signed mismatch job - worker.
class MismatchCost {
 public:
  static MismatchCost power(PowerCostParams params);
  static MismatchCost legendre(LegendreCost underqualified, LegendreCost overqualified);
  static MismatchCost of_mismatch(std::function<double(double)> h, std::string name);

  double operator()(double worker, double job) const;

  const PowerCostParams* power_params() const;
  std::string describe() const;

 private:
  struct LegendrePair {
    std::shared_ptr<const LegendreCost> under;
    std::shared_ptr<const LegendreCost> over;
  };
  struct Custom {
    std::function<double(double)> h;
    std::string name;
  };
  explicit MismatchCost(std::variant<PowerCostParams, LegendrePair, Custom> impl)
      : impl_(std::move(impl)) {}

  std::variant<PowerCostParams, LegendrePair, Custom> impl_;
};

// Monotone piecewise-linear function given by knots with strictly increasing
// abscissae. Outside [front, back] it either throws DomainError or clamps.
class TabulatedFunction {
 public:
  enum class Extrapolation { kThrow, kClamp };
  struct Knot {
    double x = 0.0;
    double y = 0.0;
  };

  TabulatedFunction() = default;
  explicit TabulatedFunction(std::vector<Knot> knots,
                             Extrapolation mode = Extrapolation::kThrow);

  static TabulatedFunction identity(double lo, double hi);
  static TabulatedFunction affine(double lo, double hi, double intercept, double slope);

  double operator()(double x) const;
  const std::vector<Knot>& knots() const { return knots_; }
  bool nondecreasing() const;
  bool monotone() const;

 private:
  std::vector<Knot> knots_;
  Extrapolation mode_ = Extrapolation::kThrow;
};

// y(x, z) = g(x) + h(z) - c(x, z).
struct ProductionSpec {
  TabulatedFunction g;
  TabulatedFunction h;
  MismatchCost cost;

  // g nondecreasing, h monotone. Throws DomainError otherwise.
  void validate() const;
};

double effective_output(const ProductionSpec& spec, double worker, double job);

}  // namespace csort
