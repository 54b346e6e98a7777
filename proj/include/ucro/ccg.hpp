#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ucro/grid.hpp"
#include "ucro/lp.hpp"
#include "ucro/subproblems.hpp"
#include "ucro/uc.hpp"
#include "ucro/uncertainty.hpp"

namespace ucro {

struct CcgConfig {
  double epsilon = 0.005;
  double time_limit_seconds = 3600.0;
  SetVariant set_variant = SetVariant::BinaryLinked;
  ModelVariant model_variant = ModelVariant::Network;
  bool seed_nominal_scenario = true;
  // Shed variants only: price shed load at the magnified prices in the
  // subproblem, and project its scenarios into the full set before they
  // enter the master. Together they keep both bounds valid for the full
  // set when the subproblem runs over a relaxed set.
  bool magnify_shed_prices = false;
  bool project_scenarios = false;
  int max_iterations = 500;
  int threads = 1;
  std::uint32_t seed = 0;
  SubproblemOptions subproblem;
};

enum class SubproblemKind { Feasibility, Optimality, LoadShed };
std::string to_string(SubproblemKind k);

struct IterationRecord {
  int iteration = 0;
  double lower_bound = 0.0;
  double upper_bound = lp::kInf;
  double gap = lp::kInf;
  double master_bound = 0.0;  // raw dual bound of this iteration's master
  SubproblemKind kind = SubproblemKind::Optimality;
  double subproblem_value = 0.0;
  int scenario_id = -1;  // pool index of the scenario added; -1 if none
  double seconds = 0.0;  // wall time of the iteration
};

enum class Termination {
  GapClosed,
  RepeatedCommitment,
  DuplicateScenario,
  TimeLimit,
  IterationLimit,
  MasterInfeasible,
};
std::string to_string(Termination t);

struct CcgState {
  std::vector<Scenario> scenario_pool;
  double lower_bound = 0.0;
  double upper_bound = lp::kInf;
  double eta = 0.0;
  std::optional<CommitmentDecision> incumbent;  // commitment that set the upper bound
  std::optional<Scenario> incumbent_worst_case;
  bool incumbent_shed_free = true;
  std::vector<IterationRecord> iteration_log;
  Termination verdict = Termination::IterationLimit;
  // Set when a commitment repeated while the gap was still above epsilon.
  bool repeated_before_convergence = false;

  double gap() const;
};

enum class SolutionStatus { Exact, Approximate, TimedOut, Infeasible };
std::string to_string(SolutionStatus s);

struct BoundCertificate {
  std::string lb_source;
  double lb = 0.0;
  std::string ub_source;
  double ub = lp::kInf;
};

struct RobustSolution {
  CommitmentDecision commitment;
  double objective = lp::kInf;  // upper bound value of the returned commitment
  double first_stage_cost = 0.0;
  BoundCertificate bounds;
  SolutionStatus status = SolutionStatus::TimedOut;
  std::optional<Scenario> worst_case;
  std::vector<std::string> notes;

  double gap() const;
};

struct CcgRun {
  RobustSolution solution;
  CcgState state;
};

CcgRun run_ccg(const GridCase& grid, const UncertaintySpec& spec, const CcgConfig& config,
               const LoadShedPrices& prices);

// Empty when the trace satisfies the bound invariants: LB nondecreasing, UB
// nonincreasing, LB <= UB, raw master bounds nondecreasing, and no repeated
// commitment before the gap closed. Otherwise one line per violation.
std::vector<std::string> check_trace(const CcgState& state, double epsilon, double rel_tol = 1e-6);

struct ApproximationResult {
  CcgRun binary_run;                      // run over the binary linked set
  std::optional<WorstCaseResult> relaxed_feasibility;
  std::optional<WorstCaseResult> relaxed_worst_case;
  std::optional<CcgRun> relaxed_run;      // only when the binary commitment is not robust over RB
  double lb = 0.0;
  double ub = lp::kInf;
  std::string ub_source;
  SolutionStatus status = SolutionStatus::TimedOut;

  double gap() const;
};

// Lower bound from the binary linked set, upper bound from the relaxed
// binary set. Shed variants run one loop with magnified subproblem prices
// and projected scenarios instead.
ApproximationResult run_approximation(const GridCase& grid, const UncertaintySpec& spec,
                                      const CcgConfig& config, const LoadShedPrices& prices);

// The commitment that carries the approximation's upper bound, with both
// bounds and their sources.
RobustSolution approximation_solution(const GridCase& grid, const ApproximationResult& result);

// Copperplate models: binary linked subproblems are exact when the binary
// reduction conditions hold (and, with shedding, when the worst case sheds
// nothing). Otherwise the result is marked Approximate with the reasons.
RobustSolution run_copperplate_exact(const GridCase& grid, const UncertaintySpec& spec,
                                     const CcgConfig& config, const LoadShedPrices& prices,
                                     CcgState* state_out = nullptr);

double relative_gap(double lb, double ub);

}  // namespace ucro
