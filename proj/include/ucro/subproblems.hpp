#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucro/grid.hpp"
#include "ucro/lp.hpp"
#include "ucro/uc.hpp"
#include "ucro/uncertainty.hpp"

namespace ucro {

// Dual values of the recourse LP. Hatted fields are the plain duals times
// the efficiency factor of their period. Ramp duals have |T|-1 columns.
// Copperplate cases keep one system-wide balance row in sigma_hat.
struct DualSolution {
  Matrix<double> delta;              // gen x period, convexity rows
  Matrix<double> beta;               // gen x (period-1), ramp-up rows
  Matrix<double> theta;              // gen x (period-1), ramp-down rows
  Matrix<double> sigma_hat;          // bus x period, balance rows
  Matrix<double> xi_hat;             // branch x period, flow definition rows
  Matrix<double> r_plus_hat;         // branch x period, f <= F
  Matrix<double> r_minus_hat;        // branch x period, f >= -F
  Matrix<double> upsilon_plus_hat;   // bus x period, mu <= pi/3
  Matrix<double> upsilon_minus_hat;  // bus x period, mu >= -pi/3
  Matrix<double> rho_hat;            // bus x period, shed <= demand
};

// Split of the dual objective: Xi collects rows not touched by the scenario,
// Phi_t and Psi_t the demand-deviation and nominal parts of period t. The
// dual objective at (alpha, gamma) is Xi + sum_t (gamma_t Phi_t + Psi_t) / e_t.
struct WorstCaseAux {
  double Xi = 0.0;
  std::vector<double> Phi;
  std::vector<double> Psi;
};

struct WorstCaseResult {
  // Recourse optimum re-solved at the returned scenario; +inf when the
  // recourse LP is infeasible there.
  double value = 0.0;
  Scenario scenario;
  WorstCaseAux aux;
  std::optional<DualSolution> duals;
  std::optional<RecourseDecision> recourse;
  double mip_objective = 0.0;
  double mip_bound = 0.0;
  bool timed_out = false;         // incumbent only; value is a lower estimate
  bool dual_bound_active = false;  // some dual still at its box after all rounds
  bool dual_consistent = true;    // MIP objective matches value to 1e-5 relative
  bool shed_free = true;          // worst-case recourse sheds nothing
  bool exact = true;              // load-shed subproblem: relaxation is tight
  int bigm_rounds = 1;
  double bigm = 0.0;              // base dual box of the last round
  double seconds = 0.0;

  bool infinite() const { return value == lp::kInf; }
};

struct SubproblemOptions {
  lp::SolverConfig solver = {3600.0, 1e-7, 1, 0, {}};
  double bigm_scale = 10.0;
  int max_bigm_rounds = 4;
};

// Maximizes the recourse optimum over a binary uncertainty set through the
// dual of the recourse LP. Temperature enters through the two values of the
// efficiency factor per period, demand through the rhs; both products with
// dual terms are linearized exactly with big-M rows.
WorstCaseResult solve_worst_case_dual(const GridCase& grid, const CommitmentDecision& commitment,
                                      const UncertaintySpec& spec, SetVariant set,
                                      ModelVariant model_variant, const RecourseCosts& costs,
                                      const SubproblemOptions& options = {});

// Largest total shed over the set, using the shed-augmented recourse of
// `network` with unit shed cost. Positive means the commitment is not
// robustly feasible.
WorstCaseResult solve_sp_feasibility(const GridCase& grid, const CommitmentDecision& commitment,
                                     const UncertaintySpec& spec, SetVariant set,
                                     ModelVariant network, const SubproblemOptions& options = {});

// Worst-case fuel cost over the set. `network` must be a variant without shed.
WorstCaseResult solve_sp_optimality(const GridCase& grid, const CommitmentDecision& commitment,
                                    const UncertaintySpec& spec, SetVariant set,
                                    ModelVariant network, const SubproblemOptions& options = {});

// Worst-case fuel plus shed cost. With magnify the shed prices are scaled by
// tilde_cost, which makes the binary-set value an upper bound for the
// continuous set. `exact` is set when the worst case sheds nothing.
WorstCaseResult solve_sp_loadshed(const GridCase& grid, const CommitmentDecision& commitment,
                                  const UncertaintySpec& spec, SetVariant set, ModelVariant network,
                                  const LoadShedPrices& prices, bool magnify,
                                  const SubproblemOptions& options = {});

// price * e(A_nominal) / e(A_nominal + A_deviation).
double tilde_cost(double price, double temperature_nominal, double temperature_deviation);
std::vector<double> magnified_shed_prices(const UncertaintySpec& spec, const LoadShedPrices& prices);

struct BinaryReductionReport {
  bool holds = true;
  std::vector<std::string> violations;
};

// Sufficient conditions under which the copperplate subproblems over the
// full set reduce to the binary linked set: every high temperature reaches
// every nominal one, a common relative demand deviation, and a common
// temperature deviation.
BinaryReductionReport check_binary_reduction_conditions(const GridCase& grid, const UncertaintySpec& spec);

}  // namespace ucro
