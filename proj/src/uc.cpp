#include "ucro/error.hpp"
#include "ucro/uc.hpp"

namespace ucro {

MasterResult solve_master(const GridCase& grid, const std::vector<Scenario>& pool,
                          ModelVariant variant, const RecourseCosts& costs,
                          const lp::SolverConfig& config) {
  lp::Model model;
  const FirstStageVars fs = build_first_stage(grid, model);
  const lp::Var eta = model.add_continuous(0.0, lp::kInf, 1.0, "eta");
  model.add_to_objective(fs.cost);
  const RecourseStructure s = build_recourse_structure(grid, variant);
  std::vector<RecourseVars> copies;
  copies.reserve(pool.size());
  for (const Scenario& scenario : pool) {
    copies.push_back(add_recourse(model, grid, s, costs, scenario, fs));
    model.add_constraint(lp::LinearExpr(eta) - copies.back().total_cost(), lp::Sense::GreaterEqual, 0.0, "cut");
  }
  const lp::SolveOutcome out = lp::solve(model, config);
  MasterResult r;
  r.status = out.status;
  r.seconds = out.solve_seconds;
  if (out.status == lp::SolveStatus::NumericalFailure) throw SolverError("master problem: " + out.message);
  if (!out.has_solution()) return r;
  r.commitment = extract_commitment(out, fs);
  r.objective = out.objective_value;
  r.bound = out.objective_bound;
  r.first_stage_cost = out.value(fs.cost);
  r.eta = out.value(eta);
  for (const auto& c : copies) r.scenario_costs.push_back(out.value(c.total_cost()));
  return r;
}

DeterministicResult deterministic_uc(const GridCase& grid, const Scenario& scenario,
                                     ModelVariant variant, const LoadShedPrices& prices,
                                     const lp::SolverConfig& config) {
  const RecourseCosts costs =
      has_shed(variant) ? RecourseCosts::fuel_and_shed(prices.price_per_period) : RecourseCosts::fuel_only();
  lp::Model model;
  const FirstStageVars fs = build_first_stage(grid, model);
  const RecourseStructure s = build_recourse_structure(grid, variant);
  const RecourseVars rv = add_recourse(model, grid, s, costs, scenario, fs);
  model.add_to_objective(fs.cost);
  model.add_to_objective(rv.total_cost());
  const lp::SolveOutcome out = lp::solve(model, config);
  DeterministicResult r;
  r.status = out.status;
  if (out.status == lp::SolveStatus::NumericalFailure) throw SolverError("deterministic UC: " + out.message);
  if (!out.has_solution()) return r;
  r.commitment = extract_commitment(out, fs);
  r.recourse = extract_recourse(grid, s, rv, out);
  r.total_cost = out.objective_value;
  return r;
}

}  // namespace ucro
