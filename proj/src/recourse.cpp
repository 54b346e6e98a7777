#include <algorithm>
#include <cmath>
#include <numbers>

#include "ucro/error.hpp"
#include "ucro/uc.hpp"

namespace ucro {

std::string to_string(RowRole r) {
  switch (r) {
    case RowRole::Convexity: return "convexity";
    case RowRole::RampUp: return "ramp-up";
    case RowRole::RampDown: return "ramp-down";
    case RowRole::Balance: return "balance";
    case RowRole::FlowDefinition: return "flow-definition";
    case RowRole::FlowUpper: return "flow-upper";
    case RowRole::FlowLower: return "flow-lower";
    case RowRole::AngleUpper: return "angle-upper";
    case RowRole::AngleLower: return "angle-lower";
    case RowRole::ShedBound: return "shed-bound";
  }
  return "?";
}

bool angle_limits_redundant(const GridCase& grid) {
  // Angle difference along a path is at most the sum of X F over its lines,
  // so angles of any flow pattern fit in +-pi/3 after a shift once every
  // shortest-path distance is at most 2 pi / 3.
  const std::size_t N = grid.num_buses();
  Matrix<double> dist(N, N, lp::kInf);
  for (std::size_t n = 0; n < N; ++n) dist(n, n) = 0.0;
  for (const Branch& br : grid.branches) {
    const double w = br.reactance * br.flow_limit;
    const auto o = static_cast<std::size_t>(br.origin_bus), d = static_cast<std::size_t>(br.destination_bus);
    dist(o, d) = dist(d, o) = std::min(dist(o, d), w);
  }
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) dist(a, b) = std::min(dist(a, b), dist(a, k) + dist(k, b));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      if (dist(a, b) != lp::kInf && dist(a, b) > 2.0 * std::numbers::pi / 3.0) return false;
  return true;
}

RecourseStructure build_recourse_structure(const GridCase& grid, ModelVariant variant) {
  const std::size_t I = grid.num_generators(), T = grid.num_periods();
  const std::size_t N = grid.num_buses(), L = grid.num_branches();
  const bool network = has_network(variant), shed = has_shed(variant);
  constexpr double kAngleLimit = std::numbers::pi / 3.0;

  RecourseStructure s;
  s.variant = variant;
  s.num_generators = I;
  s.num_periods = T;
  s.num_buses = N;
  s.num_branches = network ? L : 0;

  auto add_col = [&](ColumnKind kind, int owner, int t, int k, bool free) {
    s.columns.push_back({kind, owner, t, k, free});
    return static_cast<int>(s.columns.size() - 1);
  };
  s.lambda_col.assign(I, std::vector<std::vector<int>>(T));
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t k = 0; k < grid.generators[i].cost_curve.size(); ++k)
        s.lambda_col[i][t].push_back(add_col(ColumnKind::Lambda, int(i), int(t), int(k), false));
  if (network) {
    if (L > 0) {
      s.angle_scale = lp::kInf;
      for (const Branch& br : grid.branches) s.angle_scale = std::min(s.angle_scale, br.reactance);
    }
    s.angle_limits_redundant = angle_limits_redundant(grid);
    s.flow_col = Matrix<int>(L, T, -1);
    s.angle_col = Matrix<int>(N, T, -1);
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t t = 0; t < T; ++t) s.flow_col(l, t) = add_col(ColumnKind::Flow, int(l), int(t), 0, true);
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t t = 0; t < T; ++t) s.angle_col(n, t) = add_col(ColumnKind::Angle, int(n), int(t), 0, true);
  }
  if (shed) {
    s.shed_col = Matrix<int>(N, T, -1);
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t t = 0; t < T; ++t) s.shed_col(n, t) = add_col(ColumnKind::Shed, int(n), int(t), 0, false);
  }

  auto output_entries = [&](RecourseRow& row, std::size_t i, std::size_t t, double sign, bool scaled) {
    const auto& bp = grid.generators[i].cost_curve.breakpoints;
    for (std::size_t k = 0; k < bp.size(); ++k)
      if (bp[k].output != 0.0) row.entries.push_back({s.lambda_col[i][t][k], sign * bp[k].output, scaled});
  };

  for (std::size_t i = 0; i < I; ++i) {
    const Generator& g = grid.generators[i];
    for (std::size_t t = 0; t < T; ++t) {
      RecourseRow row;
      row.role = RowRole::Convexity;
      row.owner = int(i);
      row.period = int(t);
      row.equality = true;
      for (int col : s.lambda_col[i][t]) row.entries.push_back({col, 1.0, false});
      row.commitment.push_back({CommitmentField::Y, int(i), int(t), 1.0});
      s.rows.push_back(std::move(row));
    }
    for (std::size_t t = 0; t + 1 < T; ++t) {
      RecourseRow up;
      up.role = RowRole::RampUp;
      up.owner = int(i);
      up.period = int(t);
      output_entries(up, i, t, 1.0, false);
      output_entries(up, i, t + 1, -1.0, false);
      up.commitment.push_back({CommitmentField::Y, int(i), int(t), -g.ramp_up});
      up.commitment.push_back({CommitmentField::V, int(i), int(t + 1), -g.startup_rate});
      s.rows.push_back(std::move(up));

      RecourseRow down;
      down.role = RowRole::RampDown;
      down.owner = int(i);
      down.period = int(t);
      output_entries(down, i, t + 1, 1.0, false);
      output_entries(down, i, t, -1.0, false);
      down.commitment.push_back({CommitmentField::Y, int(i), int(t + 1), -g.ramp_down});
      down.commitment.push_back({CommitmentField::W, int(i), int(t + 1), -g.shutdown_rate});
      s.rows.push_back(std::move(down));
    }
  }

  if (network) {
    for (std::size_t n = 0; n < N; ++n) {
      const Bus& bus = grid.buses[n];
      for (std::size_t t = 0; t < T; ++t) {
        RecourseRow row;
        row.role = RowRole::Balance;
        row.owner = int(n);
        row.period = int(t);
        row.equality = !shed;
        row.hatted = true;
        row.rhs_nominal = grid.demand_nominal(n, t);
        row.rhs_deviation = grid.demand_deviation(n, t);
        for (int i : bus.attached_generator_ids) output_entries(row, std::size_t(i), t, 1.0, true);
        for (int l : bus.outgoing_branch_ids) row.entries.push_back({s.flow_col(l, t), -1.0, false});
        for (int l : bus.incoming_branch_ids) row.entries.push_back({s.flow_col(l, t), 1.0, false});
        if (shed) row.entries.push_back({s.shed_col(n, t), 1.0, false});
        s.rows.push_back(std::move(row));
      }
    }
    for (std::size_t l = 0; l < L; ++l) {
      const Branch& br = grid.branches[l];
      for (std::size_t t = 0; t < T; ++t) {
        RecourseRow def;
        def.role = RowRole::FlowDefinition;
        def.owner = int(l);
        def.period = int(t);
        def.equality = true;
        def.hatted = true;
        // X f = mu_o - mu_d, divided by X.
        const double k = s.angle_scale / br.reactance;
        def.entries = {{s.flow_col(l, t), 1.0, false},
                       {s.angle_col(br.origin_bus, t), -k, false},
                       {s.angle_col(br.destination_bus, t), k, false}};
        s.rows.push_back(std::move(def));
        for (RowRole role : {RowRole::FlowUpper, RowRole::FlowLower}) {
          RecourseRow lim;
          lim.role = role;
          lim.owner = int(l);
          lim.period = int(t);
          lim.hatted = true;
          lim.rhs_nominal = -br.flow_limit;
          lim.entries = {{s.flow_col(l, t), role == RowRole::FlowUpper ? -1.0 : 1.0, false}};
          s.rows.push_back(std::move(lim));
        }
      }
    }
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t t = 0; t < T; ++t) {
        for (RowRole role : {RowRole::AngleUpper, RowRole::AngleLower}) {
          RecourseRow lim;
          lim.role = role;
          lim.owner = int(n);
          lim.period = int(t);
          lim.hatted = true;
          lim.rhs_nominal = -kAngleLimit / s.angle_scale;
          lim.entries = {{s.angle_col(n, t), role == RowRole::AngleUpper ? -1.0 : 1.0, false}};
          s.rows.push_back(std::move(lim));
        }
      }
    }
  } else {
    for (std::size_t t = 0; t < T; ++t) {
      RecourseRow row;
      row.role = RowRole::Balance;
      row.owner = 0;
      row.period = int(t);
      row.equality = true;
      row.hatted = true;
      for (std::size_t n = 0; n < N; ++n) {
        row.rhs_nominal += grid.demand_nominal(n, t);
        row.rhs_deviation += grid.demand_deviation(n, t);
      }
      for (std::size_t i = 0; i < I; ++i) output_entries(row, i, t, 1.0, true);
      if (shed)
        for (std::size_t n = 0; n < N; ++n) row.entries.push_back({s.shed_col(n, t), 1.0, false});
      s.rows.push_back(std::move(row));
    }
  }

  if (shed) {
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t t = 0; t < T; ++t) {
        RecourseRow row;
        row.role = RowRole::ShedBound;
        row.owner = int(n);
        row.period = int(t);
        row.hatted = true;
        row.rhs_nominal = -grid.demand_nominal(n, t);
        row.rhs_deviation = -grid.demand_deviation(n, t);
        row.entries = {{s.shed_col(n, t), -1.0, false}};
        s.rows.push_back(std::move(row));
      }
    }
  }
  return s;
}

double column_cost(const GridCase& grid, const RecourseColumn& col, const RecourseCosts& costs) {
  switch (col.kind) {
    case ColumnKind::Lambda:
      return costs.include_fuel ? grid.generators[col.owner].cost_curve.breakpoints[col.breakpoint].cost : 0.0;
    case ColumnKind::Shed:
      return costs.shed_price.empty() ? 0.0 : costs.shed_price.at(col.period);
    default:
      return 0.0;
  }
}

namespace {

template <typename CommitmentValue>
RecourseVars add_recourse_impl(lp::Model& model, const GridCase& grid, const RecourseStructure& s,
                               const RecourseCosts& costs, const Scenario& scenario,
                               CommitmentValue&& commitment_value) {
  if (scenario.gamma.size() != s.num_periods)
    throw DomainError("add_recourse: scenario horizon does not match the case");
  const std::vector<double> eff = scenario.efficiency();
  RecourseVars rv;
  rv.columns.reserve(s.columns.size());
  for (const auto& col : s.columns) {
    const lp::Var v = col.free ? model.add_continuous(-lp::kInf, lp::kInf) : model.add_continuous(0.0, lp::kInf);
    rv.columns.push_back(v);
    const double c = column_cost(grid, col, costs);
    if (c == 0.0) continue;
    if (col.kind == ColumnKind::Shed) rv.shed_cost.add(v, c);
    else rv.fuel_cost.add(v, c);
  }
  rv.rows.reserve(s.rows.size());
  for (const auto& row : s.rows) {
    lp::LinearExpr lhs;
    for (const auto& e : row.entries)
      lhs.add(rv.columns[e.column], e.efficiency_scaled ? e.coef * eff[row.period] : e.coef);
    double rhs = row.rhs_nominal + row.rhs_deviation * scenario.gamma[row.period];
    for (const auto& ct : row.commitment) {
      // Moves variable commitment terms to the left; constants stay right.
      lp::LinearExpr value = commitment_value(ct);
      value *= ct.coef;
      lhs -= value;
    }
    rv.rows.push_back(model.add_constraint(lhs, row.equality ? lp::Sense::Equal : lp::Sense::GreaterEqual, rhs,
                                           to_string(row.role)));
  }
  return rv;
}

}  // namespace

RecourseVars add_recourse(lp::Model& model, const GridCase& grid, const RecourseStructure& s,
                          const RecourseCosts& costs, const Scenario& scenario,
                          const CommitmentDecision& commitment) {
  return add_recourse_impl(model, grid, s, costs, scenario, [&](const CommitmentTerm& ct) {
    const Matrix<int>& m = ct.field == CommitmentField::Y ? commitment.on_state
                           : ct.field == CommitmentField::V ? commitment.startup
                                                            : commitment.shutdown;
    return lp::LinearExpr(static_cast<double>(m(ct.generator, ct.period)));
  });
}

RecourseVars add_recourse(lp::Model& model, const GridCase& grid, const RecourseStructure& s,
                          const RecourseCosts& costs, const Scenario& scenario,
                          const FirstStageVars& fs) {
  return add_recourse_impl(model, grid, s, costs, scenario, [&](const CommitmentTerm& ct) {
    const Matrix<lp::Var>& m = ct.field == CommitmentField::Y ? fs.y : ct.field == CommitmentField::V ? fs.v : fs.w;
    return lp::LinearExpr(m(ct.generator, ct.period));
  });
}

RecourseVars build_recourse(const GridCase& grid, const CommitmentDecision& commitment,
                            const Scenario& scenario, ModelVariant variant,
                            const RecourseCosts& costs, lp::Model& model) {
  const RecourseStructure s = build_recourse_structure(grid, variant);
  RecourseVars rv = add_recourse(model, grid, s, costs, scenario, commitment);
  model.add_to_objective(rv.total_cost());
  return rv;
}

double RecourseDecision::total_shed() const {
  double total = 0.0;
  for (double w : load_shed.data()) total += w;
  return total;
}

RecourseDecision extract_recourse(const GridCase& grid, const RecourseStructure& s,
                                  const RecourseVars& vars, const lp::SolveOutcome& out) {
  const std::size_t I = s.num_generators, T = s.num_periods;
  RecourseDecision d;
  d.nominal_output = Matrix<double>(I, T);
  d.line_flow = Matrix<double>(s.num_branches, T);
  d.phase_angle = Matrix<double>(has_network(s.variant) ? s.num_buses : 0, T);
  d.load_shed = Matrix<double>(s.num_buses, T);
  for (std::size_t i = 0; i < I; ++i) {
    const auto& bp = grid.generators[i].cost_curve.breakpoints;
    d.breakpoint_weights.emplace_back(T, bp.size());
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t k = 0; k < bp.size(); ++k) {
        const double lam = out.value(vars.columns[s.lambda_col[i][t][k]]);
        d.breakpoint_weights[i](t, k) = lam;
        d.nominal_output(i, t) += lam * bp[k].output;
      }
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < s.num_branches; ++l) d.line_flow(l, t) = out.value(vars.columns[s.flow_col(l, t)]);
    if (has_network(s.variant))
      for (std::size_t n = 0; n < s.num_buses; ++n) d.phase_angle(n, t) = s.angle_scale * out.value(vars.columns[s.angle_col(n, t)]);
    if (has_shed(s.variant))
      for (std::size_t n = 0; n < s.num_buses; ++n) d.load_shed(n, t) = out.value(vars.columns[s.shed_col(n, t)]);
  }
  d.fuel_cost = out.value(vars.fuel_cost);
  d.shed_cost = out.value(vars.shed_cost);
  return d;
}

RecourseResult solve_recourse(const GridCase& grid, const CommitmentDecision& commitment,
                              const Scenario& scenario, ModelVariant variant,
                              const RecourseCosts& costs, const lp::SolverConfig& config) {
  lp::Model model;
  const RecourseStructure s = build_recourse_structure(grid, variant);
  RecourseVars rv = add_recourse(model, grid, s, costs, scenario, commitment);
  model.add_to_objective(rv.total_cost());
  const lp::SolveOutcome out = lp::solve(model, config);
  RecourseResult r;
  r.status = out.status;
  if (out.status == lp::SolveStatus::NumericalFailure)
    throw SolverError("recourse LP: " + out.message);
  if (out.status != lp::SolveStatus::Optimal) return r;
  r.objective = out.objective_value;
  if (!out.dual_values.empty()) {
    for (std::size_t i = 0; i < rv.rows.size(); ++i)
      r.dual_objective += model.constraint(rv.rows[i]).rhs * out.dual(rv.rows[i]);
  }
  r.decision = extract_recourse(grid, s, rv, out);
  return r;
}

RecourseResult solve_recourse(const GridCase& grid, const CommitmentDecision& commitment,
                              const Scenario& scenario, ModelVariant variant,
                              const LoadShedPrices& prices, const lp::SolverConfig& config) {
  const RecourseCosts costs =
      has_shed(variant) ? RecourseCosts::fuel_and_shed(prices.price_per_period) : RecourseCosts::fuel_only();
  return solve_recourse(grid, commitment, scenario, variant, costs, config);
}

}  // namespace ucro
