#include <gtest/gtest.h>

#include "ucro/error.hpp"
#include "ucro/fixtures.hpp"
#include "ucro/oracles.hpp"

namespace ucro {
namespace {

TEST(BruteForce, SingletonGivesNominalRecourse) {
  const GridCase g = fixtures::single_bus_case(2);
  const auto spec = UncertaintySpec::from_case(g, 0, 0, 0);
  const auto r = brute_force_worst_case(g, fixtures::all_on(g), spec, SetVariant::RelaxedBinary,
                                        ModelVariant::Copperplate, g.load_shed_prices, OracleObjective::Fuel);
  EXPECT_EQ(r.evaluated, 1u);
  EXPECT_NEAR(r.value, 2 * 640.0, 1e-6);
}

TEST(BruteForce, MaxDominatesEveryScenario) {
  const GridCase g = fixtures::tiny_cases()[2].grid;
  const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
  const auto spec = UncertaintySpec::from_case(g, 1, 1, 0);
  const auto c = fixtures::all_on(g);
  const auto best = brute_force_worst_case(g, c, spec, SetVariant::RelaxedBinary, net, g.load_shed_prices,
                                           OracleObjective::Fuel);
  for (const auto& s : enumerate_binary(spec, SetVariant::RelaxedBinary)) {
    const auto r = solve_recourse(g, c, s, net, RecourseCosts::fuel_only());
    ASSERT_TRUE(r.feasible());
    EXPECT_LE(r.objective, best.value + 1e-9);
  }
}

TEST(BruteForce, ThreadsGiveTheSameAnswer) {
  const GridCase g = fixtures::tiny_cases()[4].grid;
  const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
  const auto spec = UncertaintySpec::from_case(g, 2, 2, 0);
  const auto c = fixtures::all_on(g);
  const auto one = brute_force_worst_case(g, c, spec, SetVariant::RelaxedBinary, net, g.load_shed_prices,
                                          OracleObjective::Fuel, 1);
  const auto four = brute_force_worst_case(g, c, spec, SetVariant::RelaxedBinary, net, g.load_shed_prices,
                                           OracleObjective::Fuel, 4);
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.scenario_index, four.scenario_index);
}

TEST(BruteForce, InfeasibleScenariosCountAsInfinite) {
  const GridCase g = fixtures::single_bus_case(1, 98.0, 60.0);
  GridCase hot = g;
  hot.temperature_deviation = {30.0};
  const auto spec = UncertaintySpec::from_case(hot, 1, 0, 0);
  const auto r = brute_force_worst_case(hot, fixtures::all_on(hot), spec, SetVariant::RelaxedBinary,
                                        ModelVariant::Copperplate, hot.load_shed_prices, OracleObjective::Fuel);
  EXPECT_TRUE(r.infinite());
  EXPECT_EQ(r.infeasible, 1u);
}

TEST(GridScenarios, CountsAndMembership) {
  const GridCase g = fixtures::micro_cases()[0].grid;
  const auto spec = UncertaintySpec::from_case(g, 1, 1, 1);
  const auto relaxed = grid_scenarios(spec, SetVariant::RelaxedContinuous, 0.25);
  // Pairs (a1, a2) in quarter steps with a1 + a2 <= 1: 15, for each of alpha and gamma.
  EXPECT_EQ(relaxed.size(), 15u * 15u);
  const auto full = grid_scenarios(spec, SetVariant::Full, 0.25);
  EXPECT_LT(full.size(), relaxed.size());
  for (const auto& s : full) EXPECT_TRUE(is_member(spec, s, SetVariant::Full));
  for (const auto& s : enumerate_binary(spec, SetVariant::BinaryLinked)) {
    bool found = false;
    for (const auto& f : full) found = found || f.same_fractions(s);
    EXPECT_TRUE(found);
  }
  EXPECT_THROW(grid_scenarios(spec, SetVariant::BinaryLinked), GuardError);
}

TEST(Bilevel, RefusesLargeSchedules) {
  const GridCase g = fixtures::capacity_tight_case();
  const auto spec = UncertaintySpec::from_case(g, 0, 0, 0);
  EXPECT_THROW(bilevel_enumeration(g, {nominal_scenario(spec)}, ModelVariant::Copperplate, RecourseCosts::fuel_only()),
               GuardError);
}

}  // namespace
}  // namespace ucro
