#include <gtest/gtest.h>

#include "ucro/error.hpp"
#include "ucro/lp.hpp"

using namespace ucro::lp;

TEST(LpModel, MinWithLowerBoundRow) {
  Model m;
  Var x = m.add_continuous(-kInf, kInf, 1.0, "x");
  Constraint c = m.add_constraint(LinearExpr(x), Sense::GreaterEqual, 3.0);
  auto out = solve(m);
  ASSERT_EQ(out.status, SolveStatus::Optimal);
  EXPECT_NEAR(out.objective_value, 3.0, 1e-9);
  EXPECT_NEAR(out.dual(c), 1.0, 1e-9);
}

TEST(LpModel, MaxDualSign) {
  Model m;
  m.set_objective_sense(ObjectiveSense::Maximize);
  Var x = m.add_continuous(-kInf, kInf, 2.0, "x");
  Constraint c = m.add_constraint(LinearExpr(x), Sense::LessEqual, 3.0);
  auto out = solve(m);
  ASSERT_EQ(out.status, SolveStatus::Optimal);
  EXPECT_NEAR(out.objective_value, 6.0, 1e-9);
  EXPECT_NEAR(out.dual(c), 2.0, 1e-9);
}
