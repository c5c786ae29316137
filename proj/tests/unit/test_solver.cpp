#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "csort/errors.hpp"
#include "csort/solver.hpp"

using namespace csort;

namespace {

MismatchCost sqrt_cost() { return MismatchCost::power(PowerCostParams::symmetric(0.5, 1.0)); }

Layer make_layer(std::initializer_list<std::pair<double, char>> list, std::int64_t mass = 1) {
  Layer l;
  l.mass = mass;
  l.band_hi = mass;
  for (auto [s, side] : list) l.points.push_back({s, side == 'w' ? Side::kWorker : Side::kJob});
  return l;
}

std::int64_t pair_mass(const Assignment& a, double x, double z) {
  for (const auto& p : a.pairs) {
    if (p.x == x && p.z == z) return p.mass;
  }
  return 0;
}

}  // namespace

TEST(PairsIntersect, PartialOverlapOnly) {
  EXPECT_TRUE(pairs_intersect({0, 3, 1}, {1, 5, 1}));
  EXPECT_TRUE(pairs_intersect({5, 1, 1}, {0, 3, 1}));
  EXPECT_FALSE(pairs_intersect({0, 5, 1}, {1, 3, 1}));  // nested
  EXPECT_FALSE(pairs_intersect({0, 1, 1}, {2, 3, 1}));  // disjoint
  EXPECT_FALSE(pairs_intersect({0, 1, 1}, {1, 3, 1}));  // shared endpoint
}

TEST(SolveLayer, TopLayerOfMixtureSortsPositively) {
  const auto layer = make_layer({{0, 'j'}, {1, 'w'}, {3, 'j'}, {4, 'w'}});
  for (auto m : {BellmanMethod::kSimple, BellmanMethod::kEfficient}) {
    const auto sol = solve_layer(layer, sqrt_cost(), m);
    EXPECT_NEAR(sol.values.full(), 2.0, 1e-12);
    EXPECT_EQ(pair_mass(sol.assignment, 1, 0), 1);
    EXPECT_EQ(pair_mass(sol.assignment, 4, 3), 1);
    EXPECT_EQ(sol.assignment.pairs.size(), 2u);
  }
}

TEST(SolveLayer, SinglePairIsForced) {
  const auto sol = solve_layer(make_layer({{0, 'w'}, {5, 'j'}}), sqrt_cost(), BellmanMethod::kSimple);
  EXPECT_NEAR(sol.values.full(), std::sqrt(5.0), 1e-12);
  ASSERT_EQ(sol.matches.size(), 1u);
  EXPECT_EQ(sol.matches[0], (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(SolveLayer, NestedBeatsPositive) {
  const auto layer = make_layer({{0, 'w'}, {4.5, 'j'}, {5, 'w'}, {9, 'j'}});
  for (auto m : {BellmanMethod::kSimple, BellmanMethod::kEfficient}) {
    const auto sol = solve_layer(layer, sqrt_cost(), m);
    EXPECT_NEAR(sol.values.full(), 3.0 + std::sqrt(0.5), 1e-12);
    EXPECT_LT(sol.values.full(), std::sqrt(4.5) + 2.0);
    EXPECT_EQ(pair_mass(sol.assignment, 0, 9), 1);
    EXPECT_EQ(pair_mass(sol.assignment, 5, 4.5), 1);
  }
}

TEST(SolveLayer, ScalesPairsByLayerMass) {
  const auto sol =
      solve_layer(make_layer({{0, 'w'}, {4, 'j'}}, 7), sqrt_cost(), BellmanMethod::kEfficient, 10);
  EXPECT_EQ(pair_mass(sol.assignment, 0, 4), 7);
  EXPECT_EQ(sol.assignment.scale, 10);
  EXPECT_NEAR(sol.assignment.total_cost, 0.7 * 2.0, 1e-12);
}

TEST(SolveLayer, RejectsNonAlternating) {
  EXPECT_THROW(solve_layer(make_layer({{0, 'w'}, {1, 'w'}}), sqrt_cost(), BellmanMethod::kSimple),
               PreconditionViolated);
  EXPECT_THROW(solve_layer(make_layer({{0, 'w'}, {1, 'j'}, {2, 'w'}}), sqrt_cost(),
                           BellmanMethod::kEfficient),
               PreconditionViolated);
}

TEST(ValueTable, BoundaryIsZero) {
  const auto sol = solve_layer(make_layer({{0, 'w'}, {1, 'j'}, {2, 'w'}, {3, 'j'}}), sqrt_cost(),
                               BellmanMethod::kSimple);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(sol.values.value(i, static_cast<std::ptrdiff_t>(i) - 1), 0.0);
  }
  EXPECT_TRUE(sol.values.has_argmin());
}

TEST(Solve, ReflectingBinomial) {
  const DiscreteDistribution F({{0, 16}, {1, 32}, {2, 24}, {3, 8}, {4, 1}});
  const DiscreteDistribution G({{0, 1}, {1, 8}, {2, 24}, {3, 32}, {4, 16}});
  const auto a = solve(F, G, sqrt_cost());
  EXPECT_EQ(pair_mass(a, 0, 0), 1);
  EXPECT_EQ(pair_mass(a, 1, 1), 8);
  EXPECT_EQ(pair_mass(a, 2, 2), 24);
  EXPECT_EQ(pair_mass(a, 3, 3), 8);
  EXPECT_EQ(pair_mass(a, 4, 4), 1);
  EXPECT_EQ(pair_mass(a, 1, 3), 24);
  EXPECT_EQ(pair_mass(a, 0, 4), 15);
  EXPECT_EQ(a.pairs.size(), 7u);
}

TEST(Solve, MixtureForSeveralExponents) {
  const DiscreteDistribution F({{0, 16}, {1, 32}, {2, 24}, {3, 8}, {4, 28}});
  const DiscreteDistribution G({{0, 28}, {1, 8}, {2, 24}, {3, 32}, {4, 16}});
  for (double zeta : {0.3, 0.5, 0.7}) {
    const auto a = solve(F, G, MismatchCost::power(PowerCostParams::symmetric(zeta, 1)));
    EXPECT_EQ(pair_mass(a, 1, 0), 12) << zeta;
    EXPECT_EQ(pair_mass(a, 1, 3), 12) << zeta;
    EXPECT_EQ(pair_mass(a, 4, 3), 12) << zeta;
    EXPECT_EQ(a.diagonal_mass(), 16 + 8 + 24 + 8 + 16) << zeta;
    EXPECT_EQ(a.pairs.size(), 8u) << zeta;
  }
}

TEST(Solve, IdenticalSidesCostNothing) {
  const DiscreteDistribution F({{0.5, 3}, {2, 1}, {7, 5}});
  const auto a = solve(F, F, sqrt_cost());
  EXPECT_EQ(a.total_cost, 0.0);
  EXPECT_EQ(a.diagonal_mass(), F.total_mass());
}

TEST(Solve, MassMismatchThrows) {
  EXPECT_THROW(solve(DiscreteDistribution({{0, 1}}), DiscreteDistribution({{0, 2}}), sqrt_cost()),
               MassMismatch);
}

TEST(Solve, ThreadedMatchesSerial) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> sk(0, 30), ms(1, 4);
  std::vector<Atom> w, j;
  for (int i = 0; i < 40; ++i) {
    const int m = ms(rng);
    w.push_back({static_cast<double>(sk(rng)), m});
    j.push_back({static_cast<double>(sk(rng)), m});
  }
  const DiscreteDistribution F(w), G(j);
  const auto serial = solve(F, G, sqrt_cost(), {BellmanMethod::kEfficient, 1});
  const auto pooled = solve(F, G, sqrt_cost(), {BellmanMethod::kEfficient, 4});
  EXPECT_EQ(serial.pairs, pooled.pairs);
  EXPECT_EQ(serial.total_cost, pooled.total_cost);
}

TEST(SolveDetailed, CostIsSumOfLayerValues) {
  const DiscreteDistribution F({{0, 16}, {1, 32}, {2, 24}, {3, 8}, {4, 28}});
  const DiscreteDistribution G({{0, 28}, {1, 8}, {2, 24}, {3, 32}, {4, 16}});
  const auto r = solve_detailed(F, G, sqrt_cost());
  double sum = 0.0;
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    sum += r.layers[i].mass * r.layer_solutions[i].values.full();
  }
  EXPECT_NEAR(r.assignment.total_cost, sum / r.assignment.scale, 1e-12);
}

TEST(ZetaThreshold, VacuousCases) {
  EXPECT_EQ(zeta_threshold(DiscreteDistribution({{0, 1}}), DiscreteDistribution({{1, 1}})), 0.0);
  EXPECT_EQ(zeta_threshold(DiscreteDistribution({{0, 1}, {2, 1}}),
                           DiscreteDistribution({{1, 1}, {2, 1}})),
            0.0);
  EXPECT_EQ(zeta_threshold(DiscreteDistribution({{0, 2}}), DiscreteDistribution({{0, 2}})), 0.0);
}

// Independent scan of the inequality over realized distances.
TEST(ZetaThreshold, WideGapNeedsLargeExponent) {
  const DiscreteDistribution F({{0, 1}, {100, 1}});
  const DiscreteDistribution G({{1, 2}});
  const double t = zeta_threshold(F, G);
  EXPECT_GT(t, 0.0);
  EXPECT_LT(t, 1.0);
  const std::vector<double> d = {1, 99, 100};
  const auto holds = [&](double z) {
    for (double a : d)
      for (double b : d)
        if (a <= b && b - a > 1 && std::pow(2, 1 - z) * std::pow(b - a, z) > std::pow(a, z) + std::pow(b, z) + 1e-12)
          return false;
    return true;
  };
  EXPECT_TRUE(holds(t + 1e-5));
  EXPECT_FALSE(holds(t - 1e-3));
}

TEST(ZetaThreshold, LayeredPositiveOptimalAboveThreshold) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> pick(0, 2);
  const double skills[] = {0, 1, 100};
  for (int t = 0; t < 50; ++t) {
    std::vector<Atom> w, j;
    for (int i = 0; i < 4; ++i) {
      w.push_back({skills[pick(rng)], 1});
      j.push_back({skills[pick(rng)] + 0.5, 1});
    }
    const DiscreteDistribution F(w), G(j);
    const double zeta = std::max(zeta_threshold(F, G) + 1e-6, 0.05);
    if (zeta >= 1.0) continue;
    const auto c = MismatchCost::power(PowerCostParams::symmetric(zeta, 1));
    EXPECT_NEAR(layered_positive(F, G, c).total_cost, solve(F, G, c).total_cost, 1e-9);
  }
}

TEST(LayeredPositive, PairsInRankOrderWithinLayers) {
  const DiscreteDistribution F({{0, 1}, {5, 1}});
  const DiscreteDistribution G({{4.5, 1}, {9, 1}});
  const auto a = layered_positive(F, G, sqrt_cost());
  EXPECT_EQ(pair_mass(a, 0, 4.5), 1);
  EXPECT_EQ(pair_mass(a, 5, 9), 1);
}

TEST(LayeredPositive, SinglePairLayerMatchesSolve) {
  const DiscreteDistribution F({{0, 15}, {1, 24}});
  const DiscreteDistribution G({{3, 24}, {4, 15}});
  EXPECT_EQ(layered_positive(F, G, sqrt_cost()).pairs, solve(F, G, sqrt_cost()).pairs);
}

TEST(PositiveSortingConvex, SquaredCost) {
  const auto sq = MismatchCost::of_mismatch([](double d) { return d * d; }, "squared");
  const auto a = positive_sorting_convex(DiscreteDistribution({{0, 1}, {1, 1}}),
                                         DiscreteDistribution({{0.5, 1}, {2, 1}}), sq);
  EXPECT_EQ(pair_mass(a, 0, 0.5), 1);
  EXPECT_EQ(pair_mass(a, 1, 2), 1);
  EXPECT_NEAR(a.total_cost, 1.25, 1e-15);
}

TEST(PositiveSortingConvex, IdentityIsDiagonalAndNeverCrosses) {
  const DiscreteDistribution F({{0, 2}, {3, 1}});
  const auto a = positive_sorting_convex(F, F, sqrt_cost());
  EXPECT_EQ(a.diagonal_mass(), 3);
  const auto b = positive_sorting_convex(DiscreteDistribution({{0, 1}, {2, 1}}),
                                         DiscreteDistribution({{1, 1}, {3, 1}}), sqrt_cost());
  EXPECT_EQ(pair_mass(b, 0, 3), 0);
  EXPECT_EQ(pair_mass(b, 2, 1), 0);
  EXPECT_THROW(positive_sorting_convex(DiscreteDistribution({{0, 1}}),
                                       DiscreteDistribution({{0, 3}}), sqrt_cost()),
               MassMismatch);
}
