#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>

#include "ucro/error.hpp"
#include "ucro/fixtures.hpp"
#include "ucro/grid.hpp"

namespace ucro {
namespace {

const std::filesystem::path kFixtures = UCRO_TEST_FIXTURES;

TEST(LoadCase, OneBusTwoPeriods) {
  const GridCase g = load_case(kFixtures / "one_bus_two_period.json");
  EXPECT_EQ(g.num_periods(), 2u);
  EXPECT_EQ(g.num_generators(), 1u);
  EXPECT_EQ(g.num_buses(), 1u);
  EXPECT_DOUBLE_EQ(g.demand_nominal(0, 1), 80.0);
}

TEST(LoadCase, RejectsZeroReactance) {
  try {
    load_case(kFixtures / "zero_reactance.json");
    FAIL() << "accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("Branch"), std::string::npos) << e.what();
  }
}

TEST(LoadCase, RejectsNonConvexCurve) {
  try {
    load_case(kFixtures / "nonconvex_curve.json");
    FAIL() << "accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("convex"), std::string::npos) << e.what();
  }
}

TEST(LoadCase, RejectsMalformedText) {
  EXPECT_THROW(parse_case("{\"horizon\": 2"), ParseError);
  EXPECT_THROW(parse_case("[]"), Error);
  std::string text = dump_case(fixtures::single_bus_case());
  text.replace(text.find("\"horizon\""), 9, "\"horizin\"");
  EXPECT_THROW(parse_case(text), Error);
}

TEST(LoadCase, RoundTripIsExact) {
  for (const auto& [name, g] : fixtures::all_named_cases()) {
    SCOPED_TRACE(name);
    EXPECT_EQ(parse_case(dump_case(g)), g);
  }
}

TEST(LoadCase, RtsStyleCounts) {
  const GridCase g = parse_case(dump_case(fixtures::rts_style_case()));
  EXPECT_EQ(g.num_periods(), 24u);
  EXPECT_EQ(g.num_buses(), 24u);
  EXPECT_EQ(g.num_branches(), 38u);
}

TEST(ScaleDemand, IdentityShape) {
  const GridCase g = fixtures::tiny_cases()[0].grid;
  EXPECT_EQ(scale_demand_profile(g, std::vector<double>(g.num_periods(), 1.0)), g);
}

TEST(ScaleDemand, TwoPeriodExample) {
  GridCase g = fixtures::skeleton(2, 1);
  fixtures::add_generator(g, 0, {{10, 100}, {300, 3000}}, 0, 0);
  g.demand_nominal(0, 0) = g.demand_nominal(0, 1) = 100.0;
  g = scale_demand_profile(fixtures::finish(g), {0.5, 2.0});
  EXPECT_DOUBLE_EQ(g.demand_nominal(0, 0), 50.0);
  EXPECT_DOUBLE_EQ(g.demand_nominal(0, 1), 200.0);
}

TEST(ScaleDemand, ColumnSumsFollowShape) {
  GridCase g = fixtures::skeleton(24, 3);
  for (int n = 0; n < 3; ++n)
    for (int t = 0; t < 24; ++t) g.demand_nominal(n, t) = 10.0 * (n + 1);
  fixtures::add_generator(g, 0, {{10, 100}, {300, 3000}}, 0, 0);
  const auto shape = fixtures::summer_day_shape();
  const GridCase s = scale_demand_profile(fixtures::finish(g), shape);
  for (int t = 1; t < 24; ++t)
    EXPECT_NEAR(s.total_nominal_demand(t) / s.total_nominal_demand(0), shape[t] / shape[0], 1e-12);
}

TEST(PiecewiseCost, EvaluateInterpolates) {
  PiecewiseCost c{{{50, 500}, {100, 1200}}};
  EXPECT_DOUBLE_EQ(c.evaluate(60), 640.0);
  EXPECT_DOUBLE_EQ(c.evaluate(50), 500.0);
  EXPECT_DOUBLE_EQ(c.max_slope(), 14.0);
}

}  // namespace
}  // namespace ucro
