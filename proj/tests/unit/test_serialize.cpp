#include <gtest/gtest.h>

#include "csort/errors.hpp"
#include "csort/serialize.hpp"
#include "json.hpp"

using namespace csort;

namespace {

MismatchCost sqrt_cost() { return MismatchCost::power(PowerCostParams::symmetric(0.5, 1.0)); }

}  // namespace

TEST(Json, AssignmentRoundTrip) {
  const auto econ = mixture_preset(sqrt_cost());
  const auto a = solve(econ.workers, econ.jobs, econ.spec.cost);
  const std::string text = assignment_to_json(a, econ.spec.cost);
  const auto back = assignment_from_json(text, econ.spec.cost);
  EXPECT_EQ(back.pairs, a.pairs);
  EXPECT_EQ(back.scale, a.scale);
  EXPECT_DOUBLE_EQ(back.total_cost, a.total_cost);
  EXPECT_EQ(assignment_to_json(back, econ.spec.cost), text);
}

TEST(Json, AssignmentKeyOrder) {
  const auto a = make_assignment({{0, 4, 1}}, 2, sqrt_cost());
  EXPECT_EQ(assignment_to_json(a, sqrt_cost(), -1),
            R"({"scale":2,"pairs":[{"x":0.0,"z":4.0,"mass":1,"unit_cost":2.0}],"total_cost":1.0})");
}

TEST(Json, AssignmentErrors) {
  EXPECT_THROW(assignment_from_json("{", sqrt_cost()), ParseError);
  EXPECT_THROW(assignment_from_json(R"({"pairs":[]})", sqrt_cost()), ParseError);
  EXPECT_THROW(assignment_from_json(R"({"scale":1,"pairs":[{"x":0,"z":1,"mass":0}]})", sqrt_cost()),
               ParseError);
}

TEST(Json, DualRoundTrip) {
  const auto econ = reflecting_binomial_preset(sqrt_cost());
  const auto a = solve(econ.workers, econ.jobs, econ.spec.cost);
  const auto r = construct_duals(a, econ.spec);
  const std::string text = dual_to_json(r.dual, r.gap);
  const auto back = dual_from_json(text);
  ASSERT_EQ(back.points.size(), r.dual.points.size());
  for (std::size_t i = 0; i < back.points.size(); ++i) {
    EXPECT_EQ(back.points[i].skill, r.dual.points[i].skill);
    EXPECT_EQ(back.points[i].phi, r.dual.points[i].phi);
    EXPECT_EQ(back.points[i].w, r.dual.points[i].w);
    EXPECT_EQ(back.points[i].v, r.dual.points[i].v);
  }
  EXPECT_EQ(dual_to_json(back, r.gap), text);
  EXPECT_THROW(dual_from_json(R"({"phi":{"a":1},"w":{},"v":{}})"), ParseError);
}

TEST(Json, EconomyRoundTrip) {
  const auto econ = mixture_preset(sqrt_cost());
  const PowerCostParams params{0.4, 1.5, 0.6, 0.8};
  const std::string text = economy_to_json(econ.workers, econ.jobs, params, "mix");
  const auto back = economy_from_json(text);
  EXPECT_EQ(back.workers, econ.workers);
  EXPECT_EQ(back.jobs, econ.jobs);
  EXPECT_EQ(back.label, "mix");
  EXPECT_EQ(back.spec.cost(1, 3), mismatch_cost(params, 1, 3));
  EXPECT_EQ(back.spec.g(2), 1002.0);
}

TEST(Json, EconomyWithPrimitivesAndTables) {
  const auto econ = economy_from_json(R"({
    "workers": [{"skill": 0, "mass": 1}, {"skill": 2, "mass": 1}],
    "jobs": [{"skill": 1, "mass": 2}],
    "cost": {"B_p": 1, "eta_p": 1, "B_k": 1, "eta_k": 1},
    "g": [[0, 5], [2, 7]]})");
  EXPECT_NEAR(econ.spec.cost(0, 1), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(econ.spec.g(1), 6.0);
  EXPECT_DOUBLE_EQ(econ.spec.h(1), 1.0);
  EXPECT_THROW(economy_from_json(R"({"workers": []})"), ParseError);
  EXPECT_THROW(economy_from_json(R"({"workers": [{"skill": 0, "mass": 1}], "jobs": [{"skill": 0, "mass": 2}]})"),
               MassMismatch);
}

TEST(Json, LayersAndDispersionAreDeterministic) {
  const auto econ = regions_preset(sqrt_cost());
  const auto split = common_component(econ.workers, econ.jobs);
  const auto layers = decompose_layers(split.workers_rem, split.jobs_rem);
  EXPECT_EQ(layers_to_json(layers), layers_to_json(layers));
  const auto j = nlohmann::json::parse(layers_to_json(layers));
  EXPECT_EQ(j.size(), layers.size());
  EXPECT_EQ(j[0]["points"][0]["side"].get<std::string>().empty(), false);

  const auto a = solve(econ.workers, econ.jobs, econ.spec.cost);
  const auto r = dispersion_report(econ, a, construct_duals(a, econ.spec).dual);
  const auto d = nlohmann::ordered_json::parse(dispersion_to_json(r, econ.label));
  EXPECT_EQ(d.begin().key(), "label");
  EXPECT_TRUE(d["segments"].contains("overall"));
  EXPECT_TRUE(d["segments"]["overall"]["explained_sq"].is_null());
}

TEST(Json, TrialOutcome) {
  TrialOutcome t;
  t.error = "boom";
  const auto j = nlohmann::json::parse(trial_to_json(t));
  EXPECT_FALSE(j["ok"].get<bool>());
  EXPECT_EQ(j["error"], "boom");
}
