#include <algorithm>
#include <cmath>

#include "ucro/error.hpp"
#include "ucro/uc.hpp"

namespace ucro {

bool has_network(ModelVariant v) {
  return v == ModelVariant::Network || v == ModelVariant::NetworkShed;
}

bool has_shed(ModelVariant v) {
  return v == ModelVariant::NetworkShed || v == ModelVariant::CopperplateShed;
}

ModelVariant with_shed(ModelVariant v) {
  return has_network(v) ? ModelVariant::NetworkShed : ModelVariant::CopperplateShed;
}

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::Network: return "network";
    case ModelVariant::NetworkShed: return "network-shed";
    case ModelVariant::Copperplate: return "copperplate";
    case ModelVariant::CopperplateShed: return "copperplate-shed";
  }
  return "?";
}

ModelVariant parse_model_variant(const std::string& name) {
  if (name == "network") return ModelVariant::Network;
  if (name == "network-shed") return ModelVariant::NetworkShed;
  if (name == "copperplate") return ModelVariant::Copperplate;
  if (name == "copperplate-shed") return ModelVariant::CopperplateShed;
  throw DomainError("unknown model variant '" + name + "'");
}

CommitmentDecision commitment_from_schedule(const GridCase& grid, const Matrix<int>& on_state) {
  const std::size_t I = grid.num_generators(), T = grid.num_periods();
  if (on_state.rows() != I || on_state.cols() != T)
    throw DomainError("commitment_from_schedule: schedule must be generator x period");
  CommitmentDecision c{on_state, Matrix<int>(I, T), Matrix<int>(I, T)};
  for (std::size_t i = 0; i < I; ++i) {
    int prev = grid.generators[i].initial_on ? 1 : 0;
    for (std::size_t t = 0; t < T; ++t) {
      const int cur = on_state(i, t);
      c.startup(i, t) = cur > prev ? 1 : 0;
      c.shutdown(i, t) = cur < prev ? 1 : 0;
      prev = cur;
    }
  }
  return c;
}

std::string first_stage_violation(const GridCase& grid, const CommitmentDecision& c) {
  const std::size_t I = grid.num_generators(), T = grid.num_periods();
  for (const auto* m : {&c.on_state, &c.startup, &c.shutdown})
    if (m->rows() != I || m->cols() != T) return "dimension mismatch";
  for (std::size_t i = 0; i < I; ++i) {
    const Generator& g = grid.generators[i];
    int prev = g.initial_on ? 1 : 0;
    for (std::size_t t = 0; t < T; ++t) {
      const int y = c.on_state(i, t), v = c.startup(i, t), w = c.shutdown(i, t);
      const std::string at = "generator " + std::to_string(i) + " period " + std::to_string(t + 1);
      if ((y != 0 && y != 1) || (v != 0 && v != 1) || (w != 0 && w != 1)) return at + ": non-binary entry";
      if (v - w != y - prev) return at + ": startup/shutdown do not match the on/off change";
      int ups = 0, downs = 0;
      for (std::size_t h = t + 1 >= static_cast<std::size_t>(g.min_up) ? t + 1 - g.min_up : 0; h <= t; ++h)
        ups += c.startup(i, h);
      for (std::size_t h = t + 1 >= static_cast<std::size_t>(g.min_down) ? t + 1 - g.min_down : 0; h <= t; ++h)
        downs += c.shutdown(i, h);
      if (ups > y) return at + ": minimum up time violated";
      if (downs > 1 - y) return at + ": minimum down time violated";
      prev = y;
    }
  }
  return {};
}

double first_stage_cost(const GridCase& grid, const CommitmentDecision& c) {
  double cost = 0.0;
  for (std::size_t i = 0; i < grid.num_generators(); ++i)
    for (std::size_t t = 0; t < grid.num_periods(); ++t)
      cost += grid.generators[i].no_load_cost * c.on_state(i, t) +
              grid.generators[i].startup_cost * c.startup(i, t);
  return cost;
}

std::vector<double> nominal_capacity_profile(const GridCase& grid, const CommitmentDecision& c) {
  std::vector<double> cap(grid.num_periods(), 0.0);
  for (std::size_t i = 0; i < grid.num_generators(); ++i)
    for (std::size_t t = 0; t < grid.num_periods(); ++t)
      if (c.on_state(i, t)) cap[t] += grid.generators[i].cost_curve.max_output();
  return cap;
}

FirstStageVars build_first_stage(const GridCase& grid, lp::Model& model) {
  using lp::LinearExpr;
  using lp::Sense;
  const std::size_t I = grid.num_generators(), T = grid.num_periods();
  FirstStageVars fs{Matrix<lp::Var>(I, T), Matrix<lp::Var>(I, T), Matrix<lp::Var>(I, T), {}, 0};
  for (std::size_t i = 0; i < I; ++i) {
    const Generator& g = grid.generators[i];
    for (std::size_t t = 0; t < T; ++t) {
      const std::string tag = std::to_string(i) + "_" + std::to_string(t);
      fs.y(i, t) = model.add_binary(0.0, "y" + tag);
      fs.v(i, t) = model.add_continuous(0.0, 1.0, 0.0, "v" + tag);
      fs.w(i, t) = model.add_continuous(0.0, 1.0, 0.0, "w" + tag);
      fs.cost.add(fs.y(i, t), g.no_load_cost).add(fs.v(i, t), g.startup_cost);
    }
    // Period 1 against the initial state, then the logic rows.
    for (std::size_t t = 0; t < T; ++t) {
      LinearExpr e;
      e.add(fs.v(i, t), 1.0).add(fs.w(i, t), -1.0).add(fs.y(i, t), -1.0);
      if (t == 0) {
        model.add_constraint(e, Sense::Equal, g.initial_on ? -1.0 : 0.0, "init");
      } else {
        e.add(fs.y(i, t - 1), 1.0);
        model.add_constraint(e, Sense::Equal, 0.0, "logic");
      }
      ++fs.num_constraints;
    }
    for (std::size_t t = 0; t < T; ++t) {
      LinearExpr up, down;
      const std::size_t up_from = t + 1 >= static_cast<std::size_t>(g.min_up) ? t + 1 - g.min_up : 0;
      const std::size_t down_from = t + 1 >= static_cast<std::size_t>(g.min_down) ? t + 1 - g.min_down : 0;
      for (std::size_t h = up_from; h <= t; ++h) up.add(fs.v(i, h), 1.0);
      for (std::size_t h = down_from; h <= t; ++h) down.add(fs.w(i, h), 1.0);
      up.add(fs.y(i, t), -1.0);
      down.add(fs.y(i, t), 1.0);
      model.add_constraint(up, Sense::LessEqual, 0.0, "minup");
      model.add_constraint(down, Sense::LessEqual, 1.0, "mindown");
      fs.num_constraints += 2;
    }
  }
  return fs;
}

CommitmentDecision extract_commitment(const lp::SolveOutcome& out, const FirstStageVars& vars) {
  const std::size_t I = vars.y.rows(), T = vars.y.cols();
  CommitmentDecision c{Matrix<int>(I, T), Matrix<int>(I, T), Matrix<int>(I, T)};
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t t = 0; t < T; ++t) {
      c.on_state(i, t) = out.value(vars.y(i, t)) > 0.5 ? 1 : 0;
      c.startup(i, t) = out.value(vars.v(i, t)) > 0.5 ? 1 : 0;
      c.shutdown(i, t) = out.value(vars.w(i, t)) > 0.5 ? 1 : 0;
    }
  return c;
}

}  // namespace ucro
