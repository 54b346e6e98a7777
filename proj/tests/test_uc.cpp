#include <gtest/gtest.h>

#include <cmath>

#include "ucro/ccg.hpp"
#include "ucro/fixtures.hpp"
#include "ucro/uc.hpp"

namespace ucro {
namespace {

using fixtures::add_branch;
using fixtures::add_generator;
using fixtures::finish;
using fixtures::skeleton;

Scenario nominal(const GridCase& g) { return nominal_scenario(UncertaintySpec::from_case(g, 0, 0, 0)); }

// Closed form for the one-unit case: nominal output D / e(A), cost by
// interpolation between (50, $500) and (100, $1200).
double hand_cost(double demand, double temperature) {
  const double x = demand / (1.2 - temperature / 300.0);
  return 500.0 + (x - 50.0) * 700.0 / 50.0;
}

TEST(Recourse, OneUnitAtSixtyDegrees) {
  const GridCase g = fixtures::single_bus_case(1, 60.0, 60.0);
  const auto r = solve_recourse(g, fixtures::all_on(g), nominal(g), ModelVariant::Network, RecourseCosts::fuel_only());
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.objective, hand_cost(60, 60), 1e-6);
  EXPECT_NEAR(r.objective, 640.0, 1e-6);
  EXPECT_NEAR(r.decision->nominal_output(0, 0), 60.0, 1e-6);
}

TEST(Recourse, OneUnitAtNinetyDegrees) {
  const GridCase g = fixtures::single_bus_case(1, 60.0, 90.0);
  const auto r = solve_recourse(g, fixtures::all_on(g), nominal(g), ModelVariant::Network, RecourseCosts::fuel_only());
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.decision->nominal_output(0, 0), 200.0 / 3.0, 1e-6);
  EXPECT_NEAR(r.objective, hand_cost(60, 90), 1e-6);
  EXPECT_NEAR(r.objective, 733.3333333333334, 1e-6);
}

TEST(Recourse, AllOffIsInfeasible) {
  const GridCase g = fixtures::single_bus_case(1);
  CommitmentDecision c = fixtures::all_on(g);
  Matrix<int> off(1, 1, 0);
  c = commitment_from_schedule(g, off);
  const auto r = solve_recourse(g, c, nominal(g), ModelVariant::Network, RecourseCosts::fuel_only());
  EXPECT_EQ(r.status, lp::SolveStatus::Infeasible);
}

TEST(Recourse, AllOffShedsEverything) {
  const GridCase g = fixtures::single_bus_case(2);
  const CommitmentDecision c = commitment_from_schedule(g, Matrix<int>(1, 2, 0));
  const auto r = solve_recourse(g, c, nominal(g), ModelVariant::NetworkShed, g.load_shed_prices);
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.decision->load_shed(0, 0), 60.0, 1e-6);
  EXPECT_NEAR(r.objective, 2 * 60.0 * g.load_shed_prices.price_per_period[0], 1e-6);
}

// With shedding the balance row is >=, so a running unit may sit at its
// minimum output with no demand.
TEST(Recourse, ZeroDemandRunsAtMinimum) {
  const GridCase g = fixtures::single_bus_case(2, 0.0);
  const auto r = solve_recourse(g, fixtures::all_on(g), nominal(g), ModelVariant::NetworkShed, g.load_shed_prices);
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.objective, 2 * 500.0, 1e-6);
}

TEST(Recourse, LineLimitForcesShed) {
  GridCase g = skeleton(1, 2);
  add_generator(g, 0, {{10, 100}, {300, 3000}}, 0, 0);
  add_branch(g, 0, 1, 40.0, 0.001);
  g.demand_nominal(1, 0) = 70.0;
  g = finish(g);
  const auto plain = solve_recourse(g, fixtures::all_on(g), nominal(g), ModelVariant::Network, RecourseCosts::fuel_only());
  EXPECT_EQ(plain.status, lp::SolveStatus::Infeasible);
  const auto shed = solve_recourse(g, fixtures::all_on(g), nominal(g), ModelVariant::NetworkShed, g.load_shed_prices);
  ASSERT_TRUE(shed.feasible());
  EXPECT_NEAR(shed.decision->load_shed(1, 0), 30.0, 1e-6);
  EXPECT_NEAR(shed.decision->line_flow(0, 0), 40.0, 1e-6);
}

TEST(Recourse, BreakpointWeightsAreConsistent) {
  for (const auto& [name, g] : fixtures::tiny_cases()) {
    SCOPED_TRACE(name);
    const auto c = fixtures::all_on(g);
    const auto r = solve_recourse(g, c, nominal(g), g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate,
                                  RecourseCosts::fuel_only());
    ASSERT_TRUE(r.feasible());
    for (std::size_t i = 0; i < g.num_generators(); ++i)
      for (std::size_t t = 0; t < g.num_periods(); ++t) {
        const auto& bp = g.generators[i].cost_curve.breakpoints;
        double x = 0, w = 0;
        for (std::size_t k = 0; k < bp.size(); ++k) {
          x += r.decision->breakpoint_weights[i](t, k) * bp[k].output;
          w += r.decision->breakpoint_weights[i](t, k);
        }
        EXPECT_NEAR(x, r.decision->nominal_output(i, t), 1e-6);
        EXPECT_NEAR(w, c.on_state(i, t), 1e-6);
      }
  }
}

TEST(Recourse, HotterIsNeverCheaperWithoutRampLimits) {
  for (const auto& [name, g] : fixtures::tiny_cases()) {
    if (name == "ramp-limited") continue;
    SCOPED_TRACE(name);
    const auto c = fixtures::all_on(g);
    const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    GridCase hot = g;
    hot.temperature_nominal[0] += 5.0;
    const auto a = solve_recourse(g, c, nominal(g), net, RecourseCosts::fuel_only());
    const auto b = solve_recourse(hot, c, nominal(hot), net, RecourseCosts::fuel_only());
    ASSERT_TRUE(a.feasible());
    if (b.feasible()) {
      EXPECT_GE(b.objective, a.objective - 1e-6);
    }
  }
}

// Ramp rows act on nominal output, so a hotter period 1 raises x_1 and
// loosens the ramp into period 2.
TEST(Recourse, HotterCanBeCheaperUnderRampLimits) {
  GridCase g = fixtures::by_name("ramp-limited");
  const auto c = fixtures::all_on(g);
  const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
  GridCase hot = g;
  hot.temperature_nominal[0] += 5.0;
  const auto a = solve_recourse(g, c, nominal(g), net, RecourseCosts::fuel_only());
  const auto b = solve_recourse(hot, c, nominal(hot), net, RecourseCosts::fuel_only());
  ASSERT_TRUE(a.feasible() && b.feasible());
  EXPECT_LT(b.objective, a.objective - 1e-3);
}

TEST(Recourse, ShedNeverCostsMore) {
  for (const auto& [name, g] : fixtures::tiny_cases()) {
    SCOPED_TRACE(name);
    const auto c = fixtures::all_on(g);
    const bool net = g.num_branches() > 0;
    const auto plain = solve_recourse(g, c, nominal(g), net ? ModelVariant::Network : ModelVariant::Copperplate,
                                      g.load_shed_prices);
    const auto shed = solve_recourse(g, c, nominal(g), net ? ModelVariant::NetworkShed : ModelVariant::CopperplateShed,
                                     g.load_shed_prices);
    ASSERT_TRUE(plain.feasible() && shed.feasible());
    EXPECT_LE(shed.objective, plain.objective + 1e-6);
    if (shed.decision->total_shed() <= 1e-9) EXPECT_NEAR(shed.objective, plain.objective, 1e-6);
  }
}

TEST(FirstStage, ConstraintCount) {
  GridCase g = skeleton(5, 1);
  add_generator(g, 0, {{10, 100}, {100, 1000}}, 0, 0, 3, 2);
  add_generator(g, 0, {{10, 100}, {100, 1000}}, 0, 0, 1, 4);
  add_generator(g, 0, {{10, 100}, {100, 1000}}, 0, 0, 6, 1);
  g = finish(g);
  lp::Model m;
  const FirstStageVars v = build_first_stage(g, m);
  const int T = 5;
  // Initial state, logic rows, then one min-up and one min-down row per
  // period: windows that would start before period 1 are truncated.
  std::size_t expected = 0;
  for (std::size_t i = 0; i < g.num_generators(); ++i) expected += 1 + (T - 1) + T + T;
  EXPECT_EQ(v.num_constraints, expected);
  EXPECT_EQ(m.num_constraints(), expected);
}

TEST(FirstStage, MinUpExcludesOnOffOn) {
  GridCase g = skeleton(3, 1);
  add_generator(g, 0, {{10, 100}, {100, 1000}}, 0, 0, 2, 1, 1e3, false);
  g = finish(g);
  Matrix<int> y(1, 3, 0);
  y(0, 0) = 1;
  y(0, 2) = 1;
  EXPECT_FALSE(first_stage_violation(g, commitment_from_schedule(g, y)).empty());
  y(0, 1) = 1;
  EXPECT_TRUE(first_stage_violation(g, commitment_from_schedule(g, y)).empty());
}

TEST(FirstStage, ShutdownAtStartIsForced) {
  const GridCase g = fixtures::single_bus_case(2);
  Matrix<int> y(1, 2, 0);
  const CommitmentDecision c = commitment_from_schedule(g, y);
  EXPECT_EQ(c.shutdown(0, 0), 1);
  EXPECT_EQ(c.startup(0, 0), 0);
}

// No-load cost dominates: the unit goes off in the idle middle period.
TEST(Deterministic, MatchesScheduleEnumeration) {
  GridCase g = skeleton(3, 1);
  add_generator(g, 0, {{10, 100}, {100, 1000}}, 5000, 0, 1, 1, 1e3, true);
  g.demand_nominal(0, 0) = 50;
  g.demand_nominal(0, 2) = 50;
  g.load_shed_prices.price_per_period.assign(3, 200.0);
  g = finish(g);
  const auto det = deterministic_uc(g, nominal(g), ModelVariant::NetworkShed, g.load_shed_prices);
  ASSERT_EQ(det.status, lp::SolveStatus::Optimal);
  double best = lp::kInf;
  for (int mask = 0; mask < 8; ++mask) {
    Matrix<int> y(1, 3);
    for (int t = 0; t < 3; ++t) y(0, t) = (mask >> t) & 1;
    const auto c = commitment_from_schedule(g, y);
    if (!first_stage_violation(g, c).empty()) continue;
    const auto r = solve_recourse(g, c, nominal(g), ModelVariant::NetworkShed, g.load_shed_prices);
    if (r.feasible()) best = std::min(best, first_stage_cost(g, c) + r.objective);
  }
  EXPECT_NEAR(det.total_cost, best, 1e-6);
  EXPECT_EQ(det.commitment.on_state(0, 1), 0);
}

TEST(Deterministic, InfeasibleWhenDemandExceedsCapacity) {
  const GridCase g = fixtures::single_bus_case(1, 150.0);
  EXPECT_EQ(deterministic_uc(g, nominal(g), ModelVariant::Network, g.load_shed_prices).status,
            lp::SolveStatus::Infeasible);
}

TEST(Deterministic, ZeroBudgetRobustSolveAgrees) {
  for (const auto& [name, g] : fixtures::micro_cases()) {
    SCOPED_TRACE(name);
    const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    const auto spec = UncertaintySpec::from_case(g, 0, 0, 0);
    const auto det = deterministic_uc(g, nominal_scenario(spec), net, g.load_shed_prices);
    CcgConfig cfg;
    cfg.epsilon = 1e-6;
    cfg.model_variant = net;
    const auto run = run_ccg(g, spec, cfg, g.load_shed_prices);
    ASSERT_EQ(det.status, lp::SolveStatus::Optimal);
    EXPECT_NEAR(run.solution.objective, det.total_cost, 1e-6 * std::max(1.0, det.total_cost));
    EXPECT_LE(run.state.iteration_log.size(), 2u);
    ASSERT_GE(run.state.iteration_log.size(), 1u);
  }
}

TEST(Master, NominalPoolMatchesDeterministic) {
  for (const auto& [name, g] : fixtures::micro_cases()) {
    SCOPED_TRACE(name);
    const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    const auto det = deterministic_uc(g, nominal(g), net, g.load_shed_prices);
    const auto m = solve_master(g, {nominal(g)}, net, RecourseCosts::fuel_only());
    ASSERT_EQ(m.status, lp::SolveStatus::Optimal);
    EXPECT_NEAR(m.objective, det.total_cost, 1e-6 * std::max(1.0, det.total_cost));
  }
}

TEST(Master, MoreScenariosNeverLower) {
  const GridCase g = fixtures::micro_cases()[2].grid;
  const auto spec = UncertaintySpec::from_case(g, 1, 1, 0);
  const auto all = enumerate_binary(spec, SetVariant::BinaryLinked);
  std::vector<Scenario> pool;
  double last = -lp::kInf;
  for (const auto& s : all) {
    pool.push_back(s);
    const auto m = solve_master(g, pool, g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate,
                                RecourseCosts::fuel_only());
    ASSERT_EQ(m.status, lp::SolveStatus::Optimal);
    EXPECT_GE(m.objective, last - 1e-6 * std::abs(last));
    last = m.objective;
  }
}

TEST(CapacityProfile, SumsLargestBreakpoint) {
  const GridCase g = fixtures::capacity_tight_case();
  Matrix<int> y(5, 24, 0);
  for (int t = 0; t < 24; ++t) y(0, t) = 1;
  y(1, 5) = 1;
  const auto p = nominal_capacity_profile(g, commitment_from_schedule(g, y));
  EXPECT_DOUBLE_EQ(p[0], 100.0);
  EXPECT_DOUBLE_EQ(p[5], 200.0);
}

}  // namespace
}  // namespace ucro
