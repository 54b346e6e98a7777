#include <gtest/gtest.h>

#include <filesystem>

#include <json.hpp>

#include "ucro/fixtures.hpp"
#include "ucro/report.hpp"
#include "ucro/verify.hpp"

namespace ucro {
namespace {

const std::filesystem::path kFixtures = UCRO_TEST_FIXTURES;

TEST(FormatNumber, SixSignificantDigits) {
  EXPECT_EQ(format_number(148153.4567), "148153");
  EXPECT_EQ(format_number(0.00123456789), "0.00123457");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(lp::kInf), "inf");
  EXPECT_EQ(format_number(2.5), "2.5");
}

TEST(Csv, CommitmentTableLayout) {
  const GridCase g = fixtures::micro_cases()[5].grid;
  Matrix<int> y(2, 2, 1);
  y(0, 0) = 0;
  EXPECT_EQ(commitment_csv(commitment_from_schedule(g, y)), "generator,1,2\ng1,0,1\ng2,1,1\n");
  EXPECT_EQ(capacity_profile_csv(g, commitment_from_schedule(g, y)), "series,1,2\nnominal_capacity,40,100\n");
}

TEST(Csv, SweepColumns) {
  std::vector<SweepRow> rows(1);
  rows[0].gamma_a = 1;
  rows[0].gamma_d = 2;
  rows[0].lb = 99;
  rows[0].ub = 100;
  rows[0].seconds = 3.25;
  EXPECT_EQ(sweep_csv(rows), "Gamma_A,Gamma_D,LB,UB,Gap,seconds,V_RB\n1,2,99,100,0.01,3.25,100\n");
  EXPECT_EQ(sweep_csv(rows, false), "Gamma_A,Gamma_D,LB,UB,Gap,seconds,V_RB\n1,2,99,100,0.01,,100\n");
}

TEST(Csv, RerunsAreByteIdentical) {
  const GridCase g = fixtures::micro_cases()[3].grid;
  const auto spec = UncertaintySpec::from_case(g, 1, 1, 1);
  CcgConfig cfg;
  cfg.model_variant = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
  const auto a = run_ccg(g, spec, cfg, g.load_shed_prices);
  const auto b = run_ccg(g, spec, cfg, g.load_shed_prices);
  EXPECT_EQ(iteration_log_csv(a.state, false), iteration_log_csv(b.state, false));
  EXPECT_EQ(commitment_csv(a.solution.commitment), commitment_csv(b.solution.commitment));
  EXPECT_EQ(solution_json(g, spec, a.solution), solution_json(g, spec, b.solution));
}

TEST(SolutionJson, HasBundleFields) {
  const GridCase g = fixtures::micro_cases()[0].grid;
  const auto spec = UncertaintySpec::from_case(g, 1, 1, 1);
  CcgConfig cfg;
  cfg.model_variant = g.num_branches() ? ModelVariant::Network : ModelVariant::Copperplate;
  const auto run = run_ccg(g, spec, cfg, g.load_shed_prices);
  const auto j = nlohmann::json::parse(solution_json(g, spec, run.solution));
  for (const char* key : {"status", "objective", "bounds", "commitment", "worst_case", "nominal_capacity"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["commitment"]["on"].size(), g.num_generators());
}

TEST(Verify, NonConvexCaseFailsNamingTheCheck) {
  const VerifyReport r = verify_case_file(kFixtures / "nonconvex_curve.json", {});
  EXPECT_FALSE(r.passed());
  ASSERT_FALSE(r.results.empty());
  EXPECT_EQ(r.results[0].name, "case-validation");
  EXPECT_NE(r.results[0].detail.find("convex"), std::string::npos);
}

TEST(Verify, WellFormedCasePasses) {
  const VerifyReport r = verify_case_file(kFixtures / "one_bus_two_period.json", {});
  EXPECT_TRUE(r.passed()) << r.text();
  EXPECT_GE(r.results.size(), 5u);
}

TEST(Verify, ConformingCopperplateGridCheckPasses) {
  VerifyReport r;
  verify_case("copperplate-1", fixtures::conforming_copperplate_cases()[0].grid, {}, r);
  bool seen = false;
  for (const auto& p : r.results)
    if (p.name == "copperplate-1: binary-reduction-grid") seen = p.passed;
  EXPECT_TRUE(seen) << r.text();
}

}  // namespace
}  // namespace ucro
