#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ucro/error.hpp"
#include "ucro/fixtures.hpp"
#include "ucro/uncertainty.hpp"

namespace ucro {
namespace {

UncertaintySpec spec_for(int T, int ga, int gd, int lag) {
  GridCase g = fixtures::skeleton(T, 1, 60.0, 15.0);
  fixtures::add_generator(g, 0, {{10, 100}, {300, 3000}}, 0, 0);
  for (int t = 0; t < T; ++t) {
    g.demand_nominal(0, t) = 100.0;
    g.demand_deviation(0, t) = 5.0;
  }
  return UncertaintySpec::from_case(fixtures::finish(g), ga, gd, lag);
}

// Independent filter over all 2^(2T) binary vectors.
std::size_t naive_count(int T, int ga, int gd, int lag, bool linked) {
  std::size_t count = 0;
  for (int mask = 0; mask < (1 << (2 * T)); ++mask) {
    int a[8], g[8], sa = 0, sg = 0;
    for (int t = 0; t < T; ++t) {
      a[t] = (mask >> t) & 1;
      g[t] = (mask >> (T + t)) & 1;
      sa += a[t];
      sg += g[t];
    }
    bool ok = sa <= ga && sg <= gd;
    for (int t = 0; linked && t + lag < T; ++t) {
      int s = 0;
      for (int k = t; k <= t + lag; ++k) s += g[k];
      ok = ok && s >= a[t];
    }
    count += ok;
  }
  return count;
}

TEST(EfficiencyFactor, Examples) {
  EXPECT_DOUBLE_EQ(efficiency_factor(60), 1.0);
  EXPECT_NEAR(efficiency_factor(90), 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(efficiency_factor(0), 1.2);
  EXPECT_THROW(efficiency_factor(360), DomainError);
}

TEST(Realize, ZeroAndFullDeviation) {
  const auto spec = spec_for(3, 3, 3, 1);
  const Scenario z = realize(spec, {0, 0, 0}, {0, 0, 0});
  const Scenario f = realize(spec, {1, 1, 1}, {1, 1, 1});
  for (int t = 0; t < 3; ++t) {
    EXPECT_DOUBLE_EQ(z.realized_temperature[t], 60.0);
    EXPECT_DOUBLE_EQ(z.realized_demand(0, t), 100.0);
    EXPECT_DOUBLE_EQ(f.realized_temperature[t], 75.0);
    EXPECT_DOUBLE_EQ(f.realized_demand(0, t), 105.0);
  }
}

TEST(Realize, IsAffine) {
  const auto spec = spec_for(3, 3, 3, 1);
  const std::vector<double> a{1, 0.5, 0}, g{0.25, 1, 0.75};
  const Scenario full = realize(spec, a, g);
  for (double lam : {0.0, 0.3, 1.0}) {
    std::vector<double> la(3), lg(3);
    for (int t = 0; t < 3; ++t) {
      la[t] = lam * a[t];
      lg[t] = lam * g[t];
    }
    const Scenario s = realize(spec, la, lg);
    for (int t = 0; t < 3; ++t) {
      EXPECT_NEAR(s.realized_temperature[t], 60.0 + lam * (full.realized_temperature[t] - 60.0), 1e-12);
      EXPECT_NEAR(s.realized_demand(0, t), 100.0 + lam * (full.realized_demand(0, t) - 100.0), 1e-12);
    }
  }
}

TEST(IsMember, LinkingExamples) {
  const auto spec = spec_for(3, 1, 1, 1);
  EXPECT_FALSE(is_member(spec, realize(spec, {1, 0, 0}, {0, 0, 0}), SetVariant::Full));
  EXPECT_TRUE(is_member(spec, realize(spec, {1, 0, 0}, {0, 1, 0}), SetVariant::Full));
  const auto spec2 = spec_for(2, 1, 1, 1);
  const auto r = is_member(spec2, realize(spec2, {0.5, 0.5}, {0, 0}), SetVariant::RelaxedBinary);
  EXPECT_FALSE(r);
  EXPECT_FALSE(r.violations.empty());
}

TEST(EnumerateBinary, Examples) {
  const auto s = enumerate_binary(spec_for(2, 0, 1, 0), SetVariant::RelaxedBinary);
  ASSERT_EQ(s.size(), 3u);
  for (const auto& x : s) EXPECT_EQ(x.alpha, (std::vector<double>{0, 0}));
  EXPECT_EQ(enumerate_binary(spec_for(3, 3, 3, 1), SetVariant::RelaxedBinary).size(), 64u);
}

TEST(EnumerateBinary, MatchesNaiveFilter) {
  for (int T = 1; T <= 4; ++T)
    for (int ga = 0; ga <= 2; ++ga)
      for (int gd = 0; gd <= 2; ++gd)
        for (int lag = 0; lag < std::min(T, 3); ++lag) {
          const auto spec = spec_for(T, ga, gd, lag);
          for (SetVariant v : {SetVariant::BinaryLinked, SetVariant::RelaxedBinary}) {
            const auto list = enumerate_binary(spec, v);
            EXPECT_EQ(list.size(), naive_count(T, ga, gd, lag, has_linking(v)));
            std::set<std::pair<std::vector<double>, std::vector<double>>> seen;
            for (const auto& s : list) EXPECT_TRUE(seen.insert({s.alpha, s.gamma}).second);
          }
        }
}

TEST(SetInclusion, BinaryLinkedInsideFullInsideRelaxed) {
  const auto spec = spec_for(3, 2, 1, 1);
  for (const auto& s : enumerate_binary(spec, SetVariant::BinaryLinked)) {
    EXPECT_TRUE(is_member(spec, s, SetVariant::Full));
    EXPECT_TRUE(is_member(spec, s, SetVariant::RelaxedContinuous));
  }
  for (const auto& s : enumerate_binary(spec, SetVariant::RelaxedBinary))
    EXPECT_TRUE(is_member(spec, s, SetVariant::RelaxedContinuous));
}

TEST(ProjectIntoFull, FixedPointAndMinimalLift) {
  const auto spec = spec_for(2, 2, 1, 0);
  const Scenario in = realize(spec, {1, 0}, {1, 0});
  EXPECT_TRUE(project_into_full(spec, in).same_fractions(in));
  const Scenario lifted = project_into_full(spec, realize(spec, {1, 0}, {0, 0}));
  EXPECT_EQ(lifted.alpha, (std::vector<double>{1, 0}));
  EXPECT_EQ(lifted.gamma, (std::vector<double>{1, 0}));
}

TEST(ProjectIntoFull, BudgetLimitedIsMinimalL1) {
  const auto spec = spec_for(2, 2, 1, 0);
  const Scenario from = realize(spec, {1, 1}, {0, 0});
  const Scenario p = project_into_full(spec, from);
  ASSERT_TRUE(is_member(spec, p, SetVariant::Full));
  auto l1 = [&](const Scenario& s) {
    double d = 0;
    for (int t = 0; t < 2; ++t) d += std::abs(s.alpha[t] - from.alpha[t]) + std::abs(s.gamma[t] - from.gamma[t]);
    return d;
  };
  double best = 1e9;
  for (const auto& s : enumerate_binary(spec, SetVariant::BinaryLinked)) best = std::min(best, l1(s));
  EXPECT_DOUBLE_EQ(l1(p), best);
  EXPECT_DOUBLE_EQ(p.alpha[0] + p.alpha[1], 1.0);
  EXPECT_DOUBLE_EQ(p.gamma[0] + p.gamma[1], 1.0);
}

TEST(ScenarioJson, RoundTrip) {
  const auto spec = spec_for(3, 2, 2, 1);
  const Scenario s = realize(spec, {1, 0, 0.5}, {0, 1, 0});
  EXPECT_TRUE(scenario_from_json(spec, scenario_to_json(s)).same_fractions(s, 0.0));
}

}  // namespace
}  // namespace ucro
