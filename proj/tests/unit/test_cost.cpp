#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "csort/cost.hpp"
#include "csort/errors.hpp"

using namespace csort;

namespace {

// Brute-force min over a log-spaced gamma grid refined around the best point.
double grid_min(const std::function<double(double)>& psi, double d) {
  double best_g = 0.0, best = INFINITY;
  for (int i = 0; i <= 200000; ++i) {
    const double g = std::pow(10.0, -4.0 + 8.0 * i / 200000.0);
    const double v = g * d + psi(g);
    if (v < best) best = v, best_g = g;
  }
  double lo = best_g * 0.999, hi = best_g * 1.001;
  for (int it = 0; it < 200; ++it) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    if (a * d + psi(a) < b * d + psi(b)) hi = b; else lo = a;
  }
  const double g = 0.5 * (lo + hi);
  return g * d + psi(g);
}

}  // namespace

TEST(PowerParams, UnitPrimitives) {
  const auto p = power_params_from_primitives({1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(p.zeta_p, 0.5);
  EXPECT_DOUBLE_EQ(p.rho_p, 2.0);
}

TEST(PowerParams, LargeElasticityIsNearLinear) {
  const auto p = power_params_from_primitives({1, 1e6, 1, 1});
  EXPECT_GT(p.zeta_p, 0.999);
  EXPECT_LT(p.zeta_p, 1.0);
}

TEST(PowerParams, MatchesNumericMinimization) {
  const auto p = power_params_from_primitives({4, 1, 1, 1});
  EXPECT_DOUBLE_EQ(p.zeta_p, 0.5);
  EXPECT_NEAR(p.rho_p, 4.0, 1e-12);
  const auto psi = [](double g) { return 4.0 / g; };
  for (double d : {1.0, 4.0, 9.0}) {
    EXPECT_NEAR(grid_min(psi, d), 4.0 * std::sqrt(d), 1e-9) << d;
    EXPECT_NEAR(mismatch_cost(p, 0.0, d), 4.0 * std::sqrt(d), 1e-9) << d;
  }
}

TEST(PowerParams, RejectsNonPositivePrimitives) {
  EXPECT_THROW(power_params_from_primitives({0, 1, 1, 1}), DomainError);
  EXPECT_THROW(power_params_from_primitives({1, -1, 1, 1}), DomainError);
}

TEST(MismatchCost, AsymmetricSides) {
  const PowerCostParams p{0.5, 1.0, 0.25, 2.0};
  EXPECT_DOUBLE_EQ(mismatch_cost(p, 1, 5), 2.0);
  EXPECT_DOUBLE_EQ(mismatch_cost(p, 17, 1), 4.0);
  EXPECT_DOUBLE_EQ(mismatch_cost(p, 3, 3), 0.0);
  EXPECT_THROW((PowerCostParams{1.0, 1, 0.5, 1}.validate()), DomainError);
  EXPECT_THROW((PowerCostParams{0.5, 0, 0.5, 1}.validate()), DomainError);
}

TEST(Investment, FirstOrderCondition) {
  const TechnologyPrimitives t{1, 1, 1, 1};
  auto a = optimal_investment(t, 0, 1);
  EXPECT_NEAR(a.gamma, 1.0, 1e-12);
  EXPECT_NEAR(a.fixed_cost, 1.0, 1e-12);
  a = optimal_investment(t, 0, 4);
  EXPECT_NEAR(a.gamma, 0.5, 1e-12);
  EXPECT_NEAR(a.fixed_cost, 2.0, 1e-12);
  EXPECT_THROW(optimal_investment(t, 2, 2), InvestmentUndefined);
}

TEST(Investment, MatchesNumericArgmin) {
  const TechnologyPrimitives t{2, 2, 1, 1};
  const auto a = optimal_investment(t, 0, 1);
  EXPECT_NEAR(a.gamma, std::cbrt(2.0), 1e-9);
  // bisection on the derivative of gamma + gamma^-2
  double lo = 0.1, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - 2.0 / (mid * mid * mid) < 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(a.gamma, 0.5 * (lo + hi), 1e-9);
}

TEST(Investment, OverqualifiedUsesAmenitySide) {
  const TechnologyPrimitives t{1, 1, 9, 1};
  const auto a = optimal_investment(t, 1, 0);
  EXPECT_NEAR(a.gamma, 3.0, 1e-12);
}

TEST(EffectiveOutput, IdentityOutputs) {
  const ProductionSpec spec{TabulatedFunction::identity(0, 10), TabulatedFunction::identity(0, 10),
                            MismatchCost::power(PowerCostParams::symmetric(0.5, 1))};
  EXPECT_NEAR(effective_output(spec, 1, 4), 5 - std::sqrt(3.0), 1e-15);
  EXPECT_THROW(effective_output(spec, 11, 4), DomainError);
}

TEST(Legendre, InverseSchedule) {
  const LegendreCost L([](double g) { return 1.0 / g; });
  EXPECT_NEAR(legendre_cost(L, 1.0), 2.0, 1e-9);
  EXPECT_NEAR(legendre_cost(L, 4.0), 4.0, 1e-9);
  EXPECT_EQ(legendre_cost(L, 0.0), 0.0);
  EXPECT_THROW(legendre_cost(L, -1.0), DomainError);
}

TEST(Legendre, InverseSquareAgainstDenseGrid) {
  const auto psi = [](double g) { return 0.5 / (g * g); };
  const LegendreCost L(psi);
  for (double d : {0.25, 1.0, 3.0}) {
    const double closed = 1.5 * std::pow(d, 2.0 / 3.0);
    EXPECT_NEAR(legendre_cost(L, d), closed, 1e-9) << d;
    EXPECT_NEAR(legendre_cost(L, d), grid_min(psi, d), 1e-7) << d;
  }
}

TEST(Legendre, RejectsNonConvexSchedule) {
  EXPECT_THROW(LegendreCost([](double g) { return -g; }), InvalidCost);
  EXPECT_THROW(LegendreCost([](double g) { return 1.0 - 0.5 * g; }),
               InvalidCost);
}

TEST(Legendre, MismatchCostWrapsBothSides) {
  const auto c = MismatchCost::legendre(LegendreCost([](double g) { return 1.0 / g; }),
                                        LegendreCost([](double g) { return 4.0 / g; }));
  EXPECT_NEAR(c(0, 1), 2.0, 1e-9);
  EXPECT_NEAR(c(1, 0), 4.0, 1e-9);
  EXPECT_EQ(c(2, 2), 0.0);
}

// Concave costs with c(0) = 0 are subadditive: c(a + b) <= c(a) + c(b).
TEST(CostProperties, PowerCostIsConcaveAndSubadditive) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0), z(0.05, 0.95);
  for (int t = 0; t < 2000; ++t) {
    const PowerCostParams p{z(rng), 0.5 + u(rng), z(rng), 0.5 + u(rng)};
    const double a = u(rng), b = u(rng), lam = u(rng) / 10.0;
    const auto c = [&](double d) { return mismatch_cost(p, 0.0, d); };
    EXPECT_LE(c(a + b), c(a) + c(b) + 1e-12);
    EXPECT_GE(c(lam * a + (1 - lam) * b), lam * c(a) + (1 - lam) * c(b) - 1e-12);
    EXPECT_GE(mismatch_cost(p, a, b), 0.0);
  }
}

TEST(CostProperties, TriangleInequalityOnOneSide) {
  const auto c = MismatchCost::power(PowerCostParams::symmetric(0.4, 1.3));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 2000; ++t) {
    const double x = u(rng), y = u(rng), w = u(rng);
    EXPECT_LE(c(x, w), c(x, y) + c(y, w) + 1e-12);
  }
}

TEST(Tabulated, InterpolatesAndClamps) {
  const TabulatedFunction f({{0, 10}, {1, 20}});
  EXPECT_DOUBLE_EQ(f(0.25), 12.5);
  EXPECT_THROW(f(2), DomainError);
  const TabulatedFunction g({{0, 10}, {1, 20}}, TabulatedFunction::Extrapolation::kClamp);
  EXPECT_DOUBLE_EQ(g(2), 20);
  EXPECT_DOUBLE_EQ(g(-1), 10);
  EXPECT_THROW(TabulatedFunction({{1, 0}, {1, 2}}), DomainError);
}

TEST(ProductionSpec, RejectsDecreasingG) {
  const ProductionSpec spec{TabulatedFunction({{0, 2}, {1, 1}}), TabulatedFunction::identity(0, 1),
                            MismatchCost::power({})};
  EXPECT_THROW(spec.validate(), DomainError);
}
