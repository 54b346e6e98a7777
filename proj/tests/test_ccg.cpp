#include <gtest/gtest.h>

#include <cmath>

#include "ucro/ccg.hpp"
#include "ucro/fixtures.hpp"
#include "ucro/oracles.hpp"

namespace ucro {
namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(RunCcg, MatchesBilevelEnumerationOnMicroCases) {
  for (const auto& [name, grid] : fixtures::micro_cases()) {
    SCOPED_TRACE(name);
    const auto spec = UncertaintySpec::from_case(grid, 1, 1, 0);
    CcgConfig cfg;
    cfg.epsilon = 1e-6;
    const ModelVariant net = grid.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    cfg.model_variant = net;
    const CcgRun run = run_ccg(grid, spec, cfg, grid.load_shed_prices);
    const auto oracle = bilevel_enumeration(grid, enumerate_binary(spec, SetVariant::BinaryLinked), net,
                                            RecourseCosts::fuel_only());
    ASSERT_EQ(run.solution.status, SolutionStatus::Exact) << to_string(run.state.verdict);
    EXPECT_LT(rel_diff(run.solution.objective, oracle.value), 1e-6) << run.solution.objective << " vs " << oracle.value;
    EXPECT_TRUE(check_trace(run.state, cfg.epsilon).empty());
  }
}

TEST(RunCcg, ZeroBudgetStopsAtDeterministicOptimum) {
  const GridCase g = fixtures::tiny_cases()[0].grid;
  const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
  const auto spec = UncertaintySpec::from_case(g, 0, 0, 0);
  CcgConfig cfg;
  cfg.model_variant = net;
  const auto run = run_ccg(g, spec, cfg, g.load_shed_prices);
  const auto det = deterministic_uc(g, nominal_scenario(spec), net, g.load_shed_prices);
  EXPECT_LE(run.state.iteration_log.size(), 2u);
  EXPECT_LT(rel_diff(run.solution.objective, det.total_cost), 1e-6);
  EXPECT_LE(run.solution.gap(), 1e-6);
}

TEST(RunCcg, TraceCheckerFlagsBrokenTraces) {
  CcgState st;
  IterationRecord a, b;
  a.iteration = 1;
  a.lower_bound = 10;
  a.upper_bound = 20;
  a.master_bound = 10;
  b = a;
  b.iteration = 2;
  b.lower_bound = 9;
  b.upper_bound = 25;
  b.master_bound = 9;
  st.iteration_log = {a, b};
  EXPECT_EQ(check_trace(st, 0.01).size(), 3u);
  st.iteration_log[1].lower_bound = 30;
  st.iteration_log[1].upper_bound = 20;
  st.iteration_log[1].master_bound = 30;
  st.repeated_before_convergence = true;
  EXPECT_EQ(check_trace(st, 0.01).size(), 2u);
}

TEST(Approximation, ZeroBudgetIsExact) {
  const GridCase g = fixtures::tiny_cases()[1].grid;
  const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
  const auto spec = UncertaintySpec::from_case(g, 0, 0, 0);
  CcgConfig cfg;
  cfg.model_variant = net;
  const auto r = run_approximation(g, spec, cfg, g.load_shed_prices);
  const auto det = deterministic_uc(g, nominal_scenario(spec), net, g.load_shed_prices);
  EXPECT_EQ(r.status, SolutionStatus::Exact);
  EXPECT_LT(rel_diff(r.lb, det.total_cost), 1e-5);
  EXPECT_LT(rel_diff(r.ub, det.total_cost), 1e-5);
}

// The 0.25 grid sits between the binary linked set and the full set.
TEST(Approximation, BoundsBracketGridBilevel) {
  for (const auto& [name, g] : fixtures::micro_cases()) {
    SCOPED_TRACE(name);
    const auto net = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
    const auto spec = UncertaintySpec::from_case(g, 1, 1, 1);
    CcgConfig cfg;
    cfg.epsilon = 1e-6;
    cfg.model_variant = net;
    const auto r = run_approximation(g, spec, cfg, g.load_shed_prices);
    const auto bl = bilevel_enumeration(g, grid_scenarios(spec, SetVariant::Full), net, RecourseCosts::fuel_only());
    const double tol = 1e-6 * std::abs(bl.value);
    EXPECT_LE(r.lb, bl.value + tol);
    EXPECT_LE(bl.value, r.ub + tol);
  }
}

TEST(CopperplateExact, ConformingMatchesBilevel) {
  for (const auto& [name, g] : fixtures::conforming_copperplate_cases()) {
    if (g.num_periods() != 2 || g.num_generators() > 2) continue;
    SCOPED_TRACE(name);
    const auto spec = UncertaintySpec::from_case(g, 1, 1, 1);
    CcgConfig cfg;
    cfg.epsilon = 1e-6;
    cfg.model_variant = ModelVariant::Copperplate;
    const auto sol = run_copperplate_exact(g, spec, cfg, g.load_shed_prices);
    EXPECT_EQ(sol.status, SolutionStatus::Exact);
    const auto bl = bilevel_enumeration(g, enumerate_binary(spec, SetVariant::BinaryLinked), ModelVariant::Copperplate,
                                        RecourseCosts::fuel_only());
    EXPECT_LT(rel_diff(sol.objective, bl.value), 1e-6);
  }
}

TEST(CopperplateExact, NonConformingIsApproximate) {
  GridCase g = fixtures::conforming_copperplate_cases()[0].grid;
  g.temperature_deviation = {10.0, 20.0};
  const auto spec = UncertaintySpec::from_case(g, 1, 1, 1);
  CcgConfig cfg;
  cfg.epsilon = 1e-6;
  cfg.model_variant = ModelVariant::Copperplate;
  const auto sol = run_copperplate_exact(g, spec, cfg, g.load_shed_prices);
  EXPECT_EQ(sol.status, SolutionStatus::Approximate);
  bool named = false;
  for (const auto& n : sol.notes) named = named || n.find("temperature deviation") != std::string::npos;
  EXPECT_TRUE(named);
}

TEST(RelativeGap, Convention) {
  EXPECT_EQ(relative_gap(1.0, lp::kInf), lp::kInf);
  EXPECT_DOUBLE_EQ(relative_gap(99.0, 100.0), 0.01);
  EXPECT_DOUBLE_EQ(relative_gap(5.0, 5.0), 0.0);
}

}  // namespace
}  // namespace ucro
