#include "ucro/subproblems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ucro/error.hpp"

namespace ucro {

namespace {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  void add_scaled(double coef, double var_lo, double var_hi) {
    const double a = coef * var_lo, b = coef * var_hi;
    lo += std::min(a, b);
    hi += std::max(a, b);
  }
};

// z = x * s for binary s and x in [b.lo, b.hi], as four exact rows.
void add_product(lp::Model& m, lp::Var z, const lp::LinearExpr& x, lp::Var s, Interval b) {
  using lp::LinearExpr;
  using lp::Sense;
  m.add_constraint(LinearExpr(z).add(s, -b.hi), Sense::LessEqual, 0.0, "prod");
  m.add_constraint(LinearExpr(z).add(s, -b.lo), Sense::GreaterEqual, 0.0, "prod");
  // z <= x - lo (1 - s), z >= x - hi (1 - s)
  m.add_constraint((LinearExpr(z) - x).add(s, -b.lo), Sense::LessEqual, -b.lo, "prod");
  m.add_constraint((LinearExpr(z) - x).add(s, -b.hi), Sense::GreaterEqual, -b.hi, "prod");
}

double cost_scale(const GridCase& grid, const RecourseStructure& s, const RecourseCosts& costs) {
  double scale = 1.0;
  if (costs.include_fuel) {
    for (const auto& g : grid.generators) {
      scale = std::max(scale, g.cost_curve.max_slope());
      for (const auto& bp : g.cost_curve.breakpoints)
        if (bp.output > 0.0) scale = std::max(scale, bp.cost / bp.output);
    }
  }
  if (has_shed(s.variant))
    for (double p : costs.shed_price) scale = std::max(scale, 1.2 * p);
  return scale;
}

// Box multiplier of a dual by row role. A flow-definition dual is a price
// difference plus congestion rent; an angle dual sums the flow-definition
// duals of its lines weighted by their angle coefficients.
double role_scale(const GridCase& grid, const RecourseStructure& s, const RecourseRow& row) {
  switch (row.role) {
    case RowRole::FlowDefinition: return 4.0;
    case RowRole::FlowUpper:
    case RowRole::FlowLower: return 2.0;
    case RowRole::AngleUpper:
    case RowRole::AngleLower: {
      double sum = 0.0;
      const Bus& bus = grid.buses[row.owner];
      for (int l : bus.outgoing_branch_ids) sum += s.angle_scale / grid.branches[l].reactance;
      for (int l : bus.incoming_branch_ids) sum += s.angle_scale / grid.branches[l].reactance;
      return 4.0 * std::max(1.0, sum);
    }
    default:
      return 1.0;
  }
}

double commitment_value(const CommitmentDecision& c, const CommitmentTerm& ct) {
  const Matrix<int>& m = ct.field == CommitmentField::Y ? c.on_state
                         : ct.field == CommitmentField::V ? c.startup
                                                          : c.shutdown;
  return m(ct.generator, ct.period);
}

struct DualModel {
  lp::Model model;
  std::vector<lp::Var> pi;  // one per recourse row
  std::vector<double> box;  // 0 for unboxed (free) duals
  std::vector<lp::Var> alpha, gamma;
  lp::LinearExpr xi;
  std::vector<lp::LinearExpr> phi, psi;
};

DualModel build_dual(const GridCase& grid, const CommitmentDecision& commitment,
                     const UncertaintySpec& spec, SetVariant set, const RecourseStructure& s,
                     const RecourseCosts& costs, double base_box) {
  using lp::LinearExpr;
  using lp::Sense;
  const std::size_t T = s.num_periods;
  DualModel d;
  lp::Model& m = d.model;
  m.set_objective_sense(lp::ObjectiveSense::Maximize);

  std::vector<double> e0(T), e1(T);
  for (std::size_t t = 0; t < T; ++t) {
    e0[t] = efficiency_factor(spec.temperature_nominal[t]);
    e1[t] = efficiency_factor(spec.temperature_nominal[t] + spec.temperature_deviation[t]);
  }

  for (const auto& row : s.rows) {
    if (row.role == RowRole::Convexity) {
      d.pi.push_back(m.add_continuous(-lp::kInf, lp::kInf, 0.0, "delta"));
      d.box.push_back(0.0);
      continue;
    }
    if (s.angle_limits_redundant && (row.role == RowRole::AngleUpper || row.role == RowRole::AngleLower)) {
      d.pi.push_back(m.add_continuous(0.0, 0.0, 0.0, to_string(row.role)));
      d.box.push_back(0.0);
      continue;
    }
    const double b = base_box * role_scale(grid, s, row);
    d.pi.push_back(m.add_continuous(row.equality ? -b : 0.0, b, 0.0, to_string(row.role)));
    d.box.push_back(b);
  }

  for (std::size_t t = 0; t < T; ++t) {
    d.alpha.push_back(m.add_binary(0.0, "alpha"));
    d.gamma.push_back(m.add_binary(0.0, "gamma"));
  }
  LinearExpr sum_a, sum_g;
  for (std::size_t t = 0; t < T; ++t) {
    sum_a.add(d.alpha[t], 1.0);
    sum_g.add(d.gamma[t], 1.0);
  }
  m.add_constraint(sum_a, Sense::LessEqual, spec.budget_temperature, "budget_a");
  m.add_constraint(sum_g, Sense::LessEqual, spec.budget_demand, "budget_d");
  if (has_linking(set)) {
    const std::size_t l = static_cast<std::size_t>(spec.lag);
    for (std::size_t t = 0; t + l < T; ++t) {
      LinearExpr link;
      for (std::size_t tau = t; tau <= t + l; ++tau) link.add(d.gamma[tau], 1.0);
      link.add(d.alpha[t], -1.0);
      m.add_constraint(link, Sense::GreaterEqual, 0.0, "link");
    }
  }

  // Dual rows, one per recourse column.
  struct Touch {
    int row;
    double coef;
    bool scaled;
  };
  std::vector<std::vector<Touch>> col_rows(s.columns.size());
  for (std::size_t r = 0; r < s.rows.size(); ++r)
    for (const auto& e : s.rows[r].entries) col_rows[e.column].push_back({int(r), e.coef, e.efficiency_scaled});
  for (std::size_t j = 0; j < s.columns.size(); ++j) {
    const RecourseColumn& col = s.columns[j];
    const double c = column_cost(grid, col, costs);
    const Sense sense = col.free ? Sense::Equal : Sense::LessEqual;
    bool scaled = false, plain_hatted = false, plain = false;
    int period = -1;
    bool one_period = true;
    for (const Touch& touch : col_rows[j]) {
      const RecourseRow& row = s.rows[touch.row];
      if (!row.hatted) {
        plain = true;
        continue;
      }
      (touch.scaled ? scaled : plain_hatted) = true;
      if (period < 0) period = row.period;
      else if (period != row.period) one_period = false;
    }
    LinearExpr lhs;
    for (const Touch& touch : col_rows[j]) lhs.add(d.pi[touch.row], touch.coef);
    if (col_rows[j].empty()) {
      if (c < 0.0 || (col.free && c != 0.0)) throw SolverError("dual builder: unbounded recourse column");
      continue;
    }
    if (!plain_hatted) {
      // Scaled entries: e_t a pi = a pi_hat, so the row is linear as is.
      m.add_constraint(lhs, sense, c, "dual_col");
    } else if (!scaled && !plain && one_period) {
      // Plain entries in the rows of one period: multiply through by e_t.
      const std::size_t t = static_cast<std::size_t>(period);
      lhs.add(d.alpha[t], -c * (e1[t] - e0[t]));
      m.add_constraint(lhs, sense, c * e0[t], "dual_col");
    } else {
      throw SolverError("dual builder: column mixes scaled and plain coefficients");
    }
  }

  // Objective pieces.
  d.phi.assign(T, {});
  d.psi.assign(T, {});
  std::vector<Interval> phi_box(T), psi_box(T);
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    const RecourseRow& row = s.rows[r];
    const lp::VariableData& v = m.variable(d.pi[r]);
    if (!row.hatted) {
      if (row.rhs_deviation != 0.0) throw SolverError("dual builder: uncertain rhs outside hatted rows");
      double b = row.rhs_nominal;
      for (const auto& ct : row.commitment) b += ct.coef * commitment_value(commitment, ct);
      d.xi.add(d.pi[r], b);
      continue;
    }
    const std::size_t t = static_cast<std::size_t>(row.period);
    if (row.rhs_nominal != 0.0) {
      d.psi[t].add(d.pi[r], row.rhs_nominal);
      psi_box[t].add_scaled(row.rhs_nominal, v.lower, v.upper);
    }
    if (row.rhs_deviation != 0.0) {
      d.phi[t].add(d.pi[r], row.rhs_deviation);
      phi_box[t].add_scaled(row.rhs_deviation, v.lower, v.upper);
    }
  }

  m.add_to_objective(d.xi);
  for (std::size_t t = 0; t < T; ++t) {
    LinearExpr g = d.psi[t];
    Interval g_box = psi_box[t];
    if (!d.phi[t].terms().empty()) {
      const Interval pb = phi_box[t];
      const lp::Var u = m.add_continuous(std::min(pb.lo, 0.0), std::max(pb.hi, 0.0), 0.0, "u");
      add_product(m, u, d.phi[t], d.gamma[t], pb);
      g.add(u, 1.0);
      g_box.lo += std::min(pb.lo, 0.0);
      g_box.hi += std::max(pb.hi, 0.0);
    }
    m.add_to_objective((1.0 / e0[t]) * g);
    if (e1[t] != e0[t] && !g.terms().empty()) {
      const lp::Var z = m.add_continuous(std::min(g_box.lo, 0.0), std::max(g_box.hi, 0.0), 0.0, "z");
      add_product(m, z, g, d.alpha[t], g_box);
      m.set_objective_coefficient(z, 1.0 / e1[t] - 1.0 / e0[t]);
    }
  }
  return d;
}

DualSolution extract_duals(const RecourseStructure& s, const DualModel& d, const lp::SolveOutcome& out) {
  const std::size_t I = s.num_generators, T = s.num_periods, N = s.num_buses, L = s.num_branches;
  const std::size_t Tm = T > 0 ? T - 1 : 0;
  DualSolution ds{Matrix<double>(I, T),
                  Matrix<double>(I, Tm),
                  Matrix<double>(I, Tm),
                  Matrix<double>(has_network(s.variant) ? N : 1, T),
                  Matrix<double>(L, T),
                  Matrix<double>(L, T),
                  Matrix<double>(L, T),
                  Matrix<double>(has_network(s.variant) ? N : 0, T),
                  Matrix<double>(has_network(s.variant) ? N : 0, T),
                  Matrix<double>(has_shed(s.variant) ? N : 0, T)};
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    const RecourseRow& row = s.rows[r];
    const double v = out.value(d.pi[r]);
    const std::size_t a = static_cast<std::size_t>(row.owner), t = static_cast<std::size_t>(row.period);
    switch (row.role) {
      case RowRole::Convexity: ds.delta(a, t) = v; break;
      case RowRole::RampUp: ds.beta(a, t) = v; break;
      case RowRole::RampDown: ds.theta(a, t) = v; break;
      case RowRole::Balance: ds.sigma_hat(a, t) = v; break;
      case RowRole::FlowDefinition: ds.xi_hat(a, t) = v; break;
      case RowRole::FlowUpper: ds.r_plus_hat(a, t) = v; break;
      case RowRole::FlowLower: ds.r_minus_hat(a, t) = v; break;
      case RowRole::AngleUpper: ds.upsilon_plus_hat(a, t) = v; break;
      case RowRole::AngleLower: ds.upsilon_minus_hat(a, t) = v; break;
      case RowRole::ShedBound: ds.rho_hat(a, t) = v; break;
    }
  }
  return ds;
}

bool at_box(const DualModel& d, const lp::SolveOutcome& out) {
  for (std::size_t r = 0; r < d.pi.size(); ++r)
    if (d.box[r] > 0.0 && std::abs(out.value(d.pi[r])) >= d.box[r] * (1.0 - 1e-6)) return true;
  return false;
}

// Minimum l1 norm of the boxed duals with the scenario fixed and the
// objective held at its MIP value. Falls back to `mip` if the LP fails.
lp::SolveOutcome polish(const DualModel& d, const lp::SolveOutcome& mip, const lp::SolverConfig& solver) {
  lp::Model m = d.model;
  lp::LinearExpr objective;
  for (std::size_t j = 0; j < m.num_variables(); ++j) {
    const lp::Var v{int(j)};
    objective.add(v, m.variable(v).objective);
    m.set_objective_coefficient(v, 0.0);
  }
  const double z = mip.objective_value - m.objective_offset();
  m.set_objective_offset(0.0);
  m.add_constraint(objective, lp::Sense::GreaterEqual, z - 1e-7 * std::max(1.0, std::abs(z)), "hold");
  for (std::size_t t = 0; t < d.alpha.size(); ++t) {
    const double a = mip.value(d.alpha[t]) > 0.5 ? 1.0 : 0.0, g = mip.value(d.gamma[t]) > 0.5 ? 1.0 : 0.0;
    m.set_bounds(d.alpha[t], a, a);
    m.set_bounds(d.gamma[t], g, g);
  }
  m.set_objective_sense(lp::ObjectiveSense::Minimize);
  for (std::size_t r = 0; r < d.pi.size(); ++r) {
    if (d.box[r] <= 0.0) continue;
    if (m.variable(d.pi[r]).lower >= 0.0) {
      m.set_objective_coefficient(d.pi[r], 1.0 / d.box[r]);
      continue;
    }
    const lp::Var a = m.add_continuous(0.0, lp::kInf, 1.0 / d.box[r], "abs");
    m.add_constraint(lp::LinearExpr(a).add(d.pi[r], -1.0), lp::Sense::GreaterEqual, 0.0);
    m.add_constraint(lp::LinearExpr(a).add(d.pi[r], 1.0), lp::Sense::GreaterEqual, 0.0);
  }
  lp::SolveOutcome out = lp::solve(m, solver);
  if (out.status != lp::SolveStatus::Optimal || !out.has_solution()) return mip;
  out.primal_values.resize(d.model.num_variables());
  return out;
}

}  // namespace

WorstCaseResult solve_worst_case_dual(const GridCase& grid, const CommitmentDecision& commitment,
                                      const UncertaintySpec& spec, SetVariant set,
                                      ModelVariant model_variant, const RecourseCosts& costs,
                                      const SubproblemOptions& options) {
  if (!is_binary(set))
    throw GuardError("worst-case subproblem needs a binary set variant, got " + to_string(set));
  const auto start = std::chrono::steady_clock::now();
  const RecourseStructure s = build_recourse_structure(grid, model_variant);
  const std::size_t T = s.num_periods;
  double base = options.bigm_scale * cost_scale(grid, s, costs);

  WorstCaseResult res;
  for (int round = 1;; ++round) {
    DualModel d = build_dual(grid, commitment, spec, set, s, costs, base);
    const lp::SolveOutcome out = lp::solve(d.model, options.solver);
    if (!out.has_solution())
      throw SolverError("worst-case subproblem: " + lp::to_string(out.status) +
                        (out.message.empty() ? "" : " (" + out.message + ")"));
    // A dual at its box may only be degenerate. Before enlarging, move to
    // the smallest dual solution with the same scenario and objective.
    lp::SolveOutcome sol = out;
    bool active = at_box(d, sol);
    if (active) {
      sol = polish(d, out, options.solver);
      active = at_box(d, sol);
    }
    if (active && round < options.max_bigm_rounds) {
      base *= 10.0;
      continue;
    }
    res.bigm_rounds = round;
    res.bigm = base;
    res.dual_bound_active = active;
    res.timed_out = out.status == lp::SolveStatus::TimeLimit;
    res.mip_objective = out.objective_value;
    res.mip_bound = out.objective_bound;

    std::vector<double> alpha(T), gamma(T);
    for (std::size_t t = 0; t < T; ++t) {
      alpha[t] = out.value(d.alpha[t]) > 0.5 ? 1.0 : 0.0;
      gamma[t] = out.value(d.gamma[t]) > 0.5 ? 1.0 : 0.0;
    }
    res.scenario = realize(spec, alpha, gamma);
    res.aux.Xi = sol.value(d.xi);
    for (std::size_t t = 0; t < T; ++t) {
      res.aux.Phi.push_back(sol.value(d.phi[t]));
      res.aux.Psi.push_back(sol.value(d.psi[t]));
    }
    res.duals = extract_duals(s, d, sol);
    break;
  }

  const RecourseResult rr = solve_recourse(grid, commitment, res.scenario, model_variant, costs, options.solver);
  if (rr.feasible()) {
    res.value = rr.objective;
    res.recourse = rr.decision;
    res.shed_free = rr.decision->total_shed() <= 1e-6;
    res.dual_consistent =
        std::abs(res.mip_objective - res.value) <= 1e-5 * std::max(1.0, std::abs(res.value));
  } else if (rr.status == lp::SolveStatus::Infeasible) {
    res.value = lp::kInf;
    res.shed_free = false;
    res.dual_consistent = false;
  } else {
    throw SolverError("recourse re-solve at worst case: " + lp::to_string(rr.status));
  }
  res.exact = res.shed_free;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

WorstCaseResult solve_sp_feasibility(const GridCase& grid, const CommitmentDecision& commitment,
                                     const UncertaintySpec& spec, SetVariant set,
                                     ModelVariant network, const SubproblemOptions& options) {
  return solve_worst_case_dual(grid, commitment, spec, set, with_shed(network),
                               RecourseCosts::shed_volume(grid.num_periods()), options);
}

WorstCaseResult solve_sp_optimality(const GridCase& grid, const CommitmentDecision& commitment,
                                    const UncertaintySpec& spec, SetVariant set,
                                    ModelVariant network, const SubproblemOptions& options) {
  if (has_shed(network))
    throw DomainError("solve_sp_optimality: use solve_sp_loadshed for variants with shedding");
  return solve_worst_case_dual(grid, commitment, spec, set, network, RecourseCosts::fuel_only(), options);
}

WorstCaseResult solve_sp_loadshed(const GridCase& grid, const CommitmentDecision& commitment,
                                  const UncertaintySpec& spec, SetVariant set, ModelVariant network,
                                  const LoadShedPrices& prices, bool magnify,
                                  const SubproblemOptions& options) {
  if (!has_shed(network)) throw DomainError("solve_sp_loadshed: model variant has no load shedding");
  const std::vector<double> p = magnify ? magnified_shed_prices(spec, prices) : prices.price_per_period;
  return solve_worst_case_dual(grid, commitment, spec, set, network, RecourseCosts::fuel_and_shed(p), options);
}

double tilde_cost(double price, double temperature_nominal, double temperature_deviation) {
  if (temperature_deviation < 0.0) throw DomainError("tilde_cost: negative temperature deviation");
  return price * efficiency_factor(temperature_nominal) /
         efficiency_factor(temperature_nominal + temperature_deviation);
}

std::vector<double> magnified_shed_prices(const UncertaintySpec& spec, const LoadShedPrices& prices) {
  if (prices.price_per_period.size() != spec.num_periods())
    throw DomainError("magnified_shed_prices: one price per period expected");
  std::vector<double> out(spec.num_periods());
  for (std::size_t t = 0; t < out.size(); ++t)
    out[t] = tilde_cost(prices.price_per_period[t], spec.temperature_nominal[t], spec.temperature_deviation[t]);
  return out;
}

BinaryReductionReport check_binary_reduction_conditions(const GridCase& grid, const UncertaintySpec& spec) {
  BinaryReductionReport rep;
  auto fail = [&](std::string why) {
    rep.holds = false;
    rep.violations.push_back(std::move(why));
  };
  const std::size_t T = spec.num_periods();
  constexpr double tol = 1e-9;
  double max_nominal = -lp::kInf, min_high = lp::kInf;
  for (std::size_t t = 0; t < T; ++t) {
    max_nominal = std::max(max_nominal, spec.temperature_nominal[t]);
    min_high = std::min(min_high, spec.temperature_nominal[t] + spec.temperature_deviation[t]);
  }
  if (min_high < max_nominal - tol)
    fail("temperature reach: some high temperature " + std::to_string(min_high) + " is below nominal temperature " +
         std::to_string(max_nominal));

  bool have_ratio = false, indeterminate = false, varies = false;
  double ratio = 0.0;
  for (std::size_t n = 0; n < grid.num_buses() && !indeterminate; ++n) {
    for (std::size_t t = 0; t < T; ++t) {
      const double dn = spec.demand_nominal(n, t);
      if (dn == 0.0) {
        indeterminate = true;
        break;
      }
      const double q = spec.demand_deviation(n, t) / dn;
      if (!have_ratio) {
        ratio = q;
        have_ratio = true;
      } else if (std::abs(q - ratio) > 1e-9 * std::max(1.0, std::abs(ratio))) {
        varies = true;
      }
    }
  }
  if (indeterminate) fail("demand ratio: indeterminate, zero nominal demand");
  else if (varies) fail("demand ratio: relative demand deviation differs across buses or periods");

  for (std::size_t t = 1; t < T; ++t)
    if (std::abs(spec.temperature_deviation[t] - spec.temperature_deviation[0]) > tol) {
      fail("temperature deviation: differs across periods");
      break;
    }
  return rep;
}

}  // namespace ucro
