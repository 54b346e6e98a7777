#include <gtest/gtest.h>

#include <cmath>

#include "ucro/error.hpp"
#include "ucro/fixtures.hpp"
#include "ucro/oracles.hpp"
#include "ucro/subproblems.hpp"

namespace ucro {
namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(TildeCost, MagnifiesByEfficiencyRatio) {
  EXPECT_NEAR(tilde_cost(100.0, 60.0, 20.0), 107.142857142857, 1e-9);
  EXPECT_DOUBLE_EQ(tilde_cost(80.0, 75.0, 0.0), 80.0);
  EXPECT_DOUBLE_EQ(tilde_cost(0.0, 70.0, 25.0), 0.0);
  EXPECT_THROW(tilde_cost(10.0, 300.0, 70.0), DomainError);
}

TEST(SpOptimality, MatchesBruteForceOnTinyCases) {
  for (const auto& [name, grid] : fixtures::tiny_cases()) {
    SCOPED_TRACE(name);
    const auto c = fixtures::all_on(grid);
    const auto spec = UncertaintySpec::from_case(grid, 1, 1, 0);
    const ModelVariant net = grid.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    const auto sp = solve_sp_optimality(grid, c, spec, SetVariant::RelaxedBinary, net);
    const auto bf = brute_force_worst_case(grid, c, spec, SetVariant::RelaxedBinary, net, grid.load_shed_prices,
                                           OracleObjective::Fuel);
    ASSERT_FALSE(bf.infinite());
    EXPECT_LT(rel_diff(sp.value, bf.value), 1e-6) << sp.value << " vs " << bf.value;
    EXPECT_TRUE(sp.dual_consistent);
    EXPECT_FALSE(sp.dual_bound_active);
  }
}

TEST(SpOptimality, SingletonSetGivesNominalRecourse) {
  const auto grid = fixtures::tiny_cases()[3].grid;
  const auto c = fixtures::all_on(grid);
  const auto spec = UncertaintySpec::from_case(grid, 0, 0);
  const auto sp = solve_sp_optimality(grid, c, spec, SetVariant::RelaxedBinary, ModelVariant::Network);
  const auto r = solve_recourse(grid, c, nominal_scenario(spec), ModelVariant::Network, RecourseCosts::fuel_only());
  ASSERT_TRUE(r.feasible());
  EXPECT_LT(rel_diff(sp.value, r.objective), 1e-7);
}

TEST(SpOptimality, LargerDemandBudgetNeverLower) {
  for (const auto& [name, grid] : fixtures::tiny_cases()) {
    SCOPED_TRACE(name);
    const auto c = fixtures::all_on(grid);
    const ModelVariant net = grid.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    const auto a = solve_sp_optimality(grid, c, UncertaintySpec::from_case(grid, 1, 1, 0), SetVariant::BinaryLinked, net);
    const auto b = solve_sp_optimality(grid, c, UncertaintySpec::from_case(grid, 1, 2, 0), SetVariant::BinaryLinked, net);
    EXPECT_GE(b.value, a.value - 1e-6 * std::abs(a.value));
  }
}

TEST(SpFeasibility, AmpleCapacityIsZero) {
  for (const auto& [name, grid] : fixtures::tiny_cases()) {
    SCOPED_TRACE(name);
    const ModelVariant net = grid.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    const auto sp = solve_sp_feasibility(grid, fixtures::all_on(grid), UncertaintySpec::from_case(grid, 2, 2, 0),
                                         SetVariant::RelaxedBinary, net);
    EXPECT_NEAR(sp.value, 0.0, 1e-7);
  }
}

// 95 MW unit: enough at 60 F, short at 75 F in the 95 MW peak period.
TEST(SpFeasibility, HotPeakShedsAndMatchesOracle) {
  GridCase g = fixtures::skeleton(3, 1, 60.0, 15.0);
  fixtures::add_generator(g, 0, {{10, 100}, {100, 1000}}, 0, 0);
  const double demand[3] = {60, 95, 70};
  for (int t = 0; t < 3; ++t) {
    g.demand_nominal(0, t) = demand[t];
    g.demand_deviation(0, t) = 0.05 * demand[t];
  }
  g = fixtures::finish(g);
  const auto c = fixtures::all_on(g);
  const auto spec = UncertaintySpec::from_case(g, 1, 1, 1);
  const auto sp = solve_sp_feasibility(g, c, spec, SetVariant::BinaryLinked, ModelVariant::Copperplate);
  const auto bf = brute_force_worst_case(g, c, spec, SetVariant::BinaryLinked, ModelVariant::Copperplate,
                                         g.load_shed_prices, OracleObjective::ShedSum);
  EXPECT_GT(sp.value, 0.0);
  EXPECT_LT(rel_diff(sp.value, bf.value), 1e-6);
  EXPECT_EQ(sp.scenario.alpha, (std::vector<double>{0, 1, 0}));
}

TEST(SpFeasibility, SingletonSetIsNominalShed) {
  const GridCase g = fixtures::single_bus_case(2, 120.0);
  const auto spec = UncertaintySpec::from_case(g, 0, 0, 0);
  const auto sp = solve_sp_feasibility(g, fixtures::all_on(g), spec, SetVariant::BinaryLinked, ModelVariant::Copperplate);
  EXPECT_NEAR(sp.value, 40.0, 1e-6);
}

TEST(SpLoadShed, MatchesMagnifiedOracle) {
  for (const auto& [name, grid] : fixtures::tiny_cases()) {
    SCOPED_TRACE(name);
    const ModelVariant net = grid.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    // Remove the largest unit so that some scenarios shed.
    Matrix<int> y(grid.num_generators(), grid.num_periods(), 1);
    for (std::size_t t = 0; t < grid.num_periods(); ++t) y(0, t) = 0;
    const auto c = commitment_from_schedule(grid, y);
    if (!first_stage_violation(grid, c).empty()) continue;
    const auto spec = UncertaintySpec::from_case(grid, 1, 1, 0);
    const auto sp = solve_sp_loadshed(grid, c, spec, SetVariant::RelaxedBinary, with_shed(net), grid.load_shed_prices, true);
    LoadShedPrices magnified{magnified_shed_prices(spec, grid.load_shed_prices)};
    const auto bf = brute_force_worst_case(grid, c, spec, SetVariant::RelaxedBinary, net, magnified,
                                           OracleObjective::FuelPlusShed);
    EXPECT_LT(rel_diff(sp.value, bf.value), 1e-6) << sp.value << " vs " << bf.value;
  }
}

TEST(SpLoadShed, HugePricesMatchOptimality) {
  for (const auto& [name, grid] : fixtures::tiny_cases()) {
    SCOPED_TRACE(name);
    const ModelVariant net = grid.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    const auto c = fixtures::all_on(grid);
    const auto spec = UncertaintySpec::from_case(grid, 1, 1, 0);
    LoadShedPrices big{std::vector<double>(grid.num_periods(), 1e5)};
    const auto l = solve_sp_loadshed(grid, c, spec, SetVariant::RelaxedBinary, with_shed(net), big, false);
    const auto o = solve_sp_optimality(grid, c, spec, SetVariant::RelaxedBinary, net);
    EXPECT_LT(rel_diff(l.value, o.value), 1e-6);
    EXPECT_TRUE(l.exact);
    EXPECT_TRUE(l.shed_free);
  }
}

TEST(BinaryReduction, Examples) {
  GridCase g = fixtures::skeleton(2, 1, 60.0, 15.0);
  fixtures::add_generator(g, 0, {{10, 100}, {100, 1000}}, 0, 0);
  for (int t = 0; t < 2; ++t) {
    g.demand_nominal(0, t) = 50.0 + 10 * t;
    g.demand_deviation(0, t) = 0.05 * g.demand_nominal(0, t);
  }
  g = fixtures::finish(g);
  EXPECT_TRUE(check_binary_reduction_conditions(g, UncertaintySpec::from_case(g, 1, 1, 1)).holds);

  GridCase uneven = g;
  uneven.temperature_deviation = {10.0, 20.0};
  const auto r1 = check_binary_reduction_conditions(uneven, UncertaintySpec::from_case(uneven, 1, 1, 1));
  EXPECT_FALSE(r1.holds);
  ASSERT_EQ(r1.violations.size(), 1u);
  EXPECT_EQ(r1.violations[0].rfind("temperature deviation", 0), 0u);

  GridCase spread = g;
  spread.temperature_nominal = {60.0, 90.0};
  const auto r2 = check_binary_reduction_conditions(spread, UncertaintySpec::from_case(spread, 1, 1, 1));
  EXPECT_FALSE(r2.holds);
  ASSERT_EQ(r2.violations.size(), 1u);
  EXPECT_EQ(r2.violations[0].rfind("temperature reach", 0), 0u);
}

}  // namespace
}  // namespace ucro
