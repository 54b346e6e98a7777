#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucro/grid.hpp"
#include "ucro/lp.hpp"
#include "ucro/matrix.hpp"
#include "ucro/uncertainty.hpp"

namespace ucro {

enum class ModelVariant { Network, NetworkShed, Copperplate, CopperplateShed };

bool has_network(ModelVariant v);
bool has_shed(ModelVariant v);
// Same network layout with load shedding added.
ModelVariant with_shed(ModelVariant v);
std::string to_string(ModelVariant v);
ModelVariant parse_model_variant(const std::string& name);

// y, v, w per generator and period (0/1).
struct CommitmentDecision {
  Matrix<int> on_state;
  Matrix<int> startup;
  Matrix<int> shutdown;

  std::size_t num_generators() const { return on_state.rows(); }
  std::size_t num_periods() const { return on_state.cols(); }
  friend bool operator==(const CommitmentDecision&, const CommitmentDecision&) = default;
};

// Startups and shutdowns implied by an on/off schedule and the initial state.
CommitmentDecision commitment_from_schedule(const GridCase& grid, const Matrix<int>& on_state);
// Empty string when the commitment lies in the first-stage set, otherwise the
// first violated rule.
std::string first_stage_violation(const GridCase& grid, const CommitmentDecision& c);
double first_stage_cost(const GridCase& grid, const CommitmentDecision& c);
// Sum of the largest breakpoint output over committed units, per period (MW).
std::vector<double> nominal_capacity_profile(const GridCase& grid, const CommitmentDecision& c);

struct FirstStageVars {
  Matrix<lp::Var> y, v, w;
  lp::LinearExpr cost;
  std::size_t num_constraints = 0;
};

// y binary; v, w continuous in [0,1]. Adds the initial-state, logic,
// min-up and min-down rows. Min-up/down windows are truncated at the start
// of the horizon so every period gets one row of each.
FirstStageVars build_first_stage(const GridCase& grid, lp::Model& model);
CommitmentDecision extract_commitment(const lp::SolveOutcome& out, const FirstStageVars& vars);

// ---------------------------------------------------------------------------
// Recourse LP in a form shared by the fixed-commitment LP, the master problem
// and the dual subproblems. Every row is "sum a x >= rhs" or "= rhs" with
//   rhs = rhs_nominal + rhs_deviation * gamma_t + sum(commitment terms)
// and, in efficiency-scaled entries, a multiplied by the factor of period t.
// Columns are either >= 0 or free. Bounds on flows, angles and shedding are
// rows so that they get dual variables.

enum class ColumnKind { Lambda, Flow, Angle, Shed };

struct RecourseColumn {
  ColumnKind kind = ColumnKind::Lambda;
  int owner = 0;  // generator, branch or bus
  int period = 0;
  int breakpoint = 0;
  bool free = false;
};

enum class RowRole {
  Convexity,       // sum_k lambda = y
  RampUp,          // x_t - x_{t+1} >= -(y_t ramp_up + v_{t+1} startup_rate)
  RampDown,        // x_{t+1} - x_t >= -(y_{t+1} ramp_down + w_{t+1} shutdown_rate)
  Balance,         // bus (or system) energy balance
  FlowDefinition,  // X f - mu_o + mu_d = 0
  FlowUpper,       // -f >= -F
  FlowLower,       // f >= -F
  AngleUpper,      // -mu >= -pi/3
  AngleLower,      // mu >= -pi/3
  ShedBound,       // -omega >= -D
};
std::string to_string(RowRole r);

enum class CommitmentField { Y, V, W };

struct CommitmentTerm {
  CommitmentField field = CommitmentField::Y;
  int generator = 0;
  int period = 0;
  double coef = 0.0;
};

struct RowEntry {
  int column = 0;
  double coef = 0.0;
  bool efficiency_scaled = false;
};

struct RecourseRow {
  RowRole role = RowRole::Balance;
  int owner = 0;  // generator, bus or branch; 0 for system-wide rows
  int period = 0;
  bool equality = false;
  bool hatted = false;  // rows whose duals are scaled by the efficiency factor
  double rhs_nominal = 0.0;
  double rhs_deviation = 0.0;
  std::vector<RowEntry> entries;
  std::vector<CommitmentTerm> commitment;
};

struct RecourseStructure {
  ModelVariant variant = ModelVariant::Network;
  std::size_t num_generators = 0, num_periods = 0, num_buses = 0, num_branches = 0;
  std::vector<RecourseColumn> columns;
  std::vector<RecourseRow> rows;
  std::vector<std::vector<std::vector<int>>> lambda_col;  // [i][t][k]
  Matrix<int> flow_col;                                   // branch x period
  Matrix<int> angle_col;                                  // bus x period
  Matrix<int> shed_col;                                   // bus x period
  // Angle columns hold mu / angle_scale (the smallest reactance), which keeps
  // flow-definition coefficients near 1 when reactances are small.
  double angle_scale = 1.0;
  // Every flow pattern within the line limits fits inside the angle limits,
  // so the angle rows never bind.
  bool angle_limits_redundant = false;
};

RecourseStructure build_recourse_structure(const GridCase& grid, ModelVariant variant);
// True when the +-pi/3 angle limits cannot bind for any flows within the
// line limits.
bool angle_limits_redundant(const GridCase& grid);

// Objective of the recourse LP: fuel cost (optional) plus a per-period price
// on every unit of shed load.
struct RecourseCosts {
  bool include_fuel = true;
  std::vector<double> shed_price;  // per period; empty means zero

  static RecourseCosts fuel_only() { return {}; }
  static RecourseCosts shed_volume(std::size_t periods) { return {false, std::vector<double>(periods, 1.0)}; }
  static RecourseCosts fuel_and_shed(const std::vector<double>& prices) { return {true, prices}; }
};

double column_cost(const GridCase& grid, const RecourseColumn& col, const RecourseCosts& costs);

struct RecourseVars {
  std::vector<lp::Var> columns;
  std::vector<lp::Constraint> rows;
  lp::LinearExpr fuel_cost;
  lp::LinearExpr shed_cost;
  lp::LinearExpr total_cost() const { return fuel_cost + shed_cost; }
};

// Adds one copy of the recourse LP for a scenario. Commitment values come
// from constants or from first-stage variables. Costs are returned as
// expressions and not added to the objective.
RecourseVars add_recourse(lp::Model& model, const GridCase& grid, const RecourseStructure& s,
                          const RecourseCosts& costs, const Scenario& scenario,
                          const CommitmentDecision& commitment);
RecourseVars add_recourse(lp::Model& model, const GridCase& grid, const RecourseStructure& s,
                          const RecourseCosts& costs, const Scenario& scenario,
                          const FirstStageVars& first_stage);

// Builds the recourse LP at a fixed commitment with costs in the objective.
RecourseVars build_recourse(const GridCase& grid, const CommitmentDecision& commitment,
                            const Scenario& scenario, ModelVariant variant,
                            const RecourseCosts& costs, lp::Model& model);

struct RecourseDecision {
  Matrix<double> nominal_output;                     // gen x period
  std::vector<Matrix<double>> breakpoint_weights;    // [gen] period x breakpoint
  Matrix<double> line_flow;                          // branch x period
  Matrix<double> phase_angle;                        // bus x period
  Matrix<double> load_shed;                          // bus x period
  double fuel_cost = 0.0;
  double shed_cost = 0.0;
  double total_cost() const { return fuel_cost + shed_cost; }
  double total_shed() const;
};

RecourseDecision extract_recourse(const GridCase& grid, const RecourseStructure& s,
                                  const RecourseVars& vars, const lp::SolveOutcome& out);

struct RecourseResult {
  lp::SolveStatus status = lp::SolveStatus::NumericalFailure;
  double objective = 0.0;
  double dual_objective = 0.0;  // sum of rhs * row dual
  std::optional<RecourseDecision> decision;
  bool feasible() const { return status == lp::SolveStatus::Optimal; }
};

// Cost-minimal recourse at a fixed commitment and scenario. Shed variants
// price shed load at `prices`; other variants ignore them.
RecourseResult solve_recourse(const GridCase& grid, const CommitmentDecision& commitment,
                              const Scenario& scenario, ModelVariant variant,
                              const LoadShedPrices& prices, const lp::SolverConfig& config = {});
RecourseResult solve_recourse(const GridCase& grid, const CommitmentDecision& commitment,
                              const Scenario& scenario, ModelVariant variant,
                              const RecourseCosts& costs, const lp::SolverConfig& config = {});

// ---------------------------------------------------------------------------
// Master problem: first stage plus one recourse copy per pooled scenario.

struct MasterResult {
  lp::SolveStatus status = lp::SolveStatus::NumericalFailure;
  CommitmentDecision commitment;
  double objective = 0.0;  // incumbent value f + eta
  double bound = 0.0;      // MIP dual bound, a valid lower bound
  double first_stage_cost = 0.0;
  double eta = 0.0;
  std::vector<double> scenario_costs;  // recourse cost of each pooled copy
  double seconds = 0.0;
};

MasterResult solve_master(const GridCase& grid, const std::vector<Scenario>& pool,
                          ModelVariant variant, const RecourseCosts& costs,
                          const lp::SolverConfig& config = {});

struct DeterministicResult {
  lp::SolveStatus status = lp::SolveStatus::NumericalFailure;
  CommitmentDecision commitment;
  std::optional<RecourseDecision> recourse;
  double total_cost = 0.0;
};

DeterministicResult deterministic_uc(const GridCase& grid, const Scenario& scenario,
                                     ModelVariant variant, const LoadShedPrices& prices,
                                     const lp::SolverConfig& config = {});

}  // namespace ucro
