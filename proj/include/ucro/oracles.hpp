#pragma once

#include <optional>
#include <vector>

#include "ucro/grid.hpp"
#include "ucro/lp.hpp"
#include "ucro/uc.hpp"
#include "ucro/uncertainty.hpp"

// Enumeration oracles used to check the decomposition code. Every scenario
// is priced by solving the recourse LP directly.
namespace ucro {

enum class OracleObjective { Fuel, ShedSum, FuelPlusShed };

struct OracleResult {
  // Largest recourse value; +inf when some scenario has no feasible recourse.
  double value = 0.0;
  Scenario scenario;
  std::size_t scenario_index = 0;  // position of `scenario` in the list
  std::size_t evaluated = 0;
  std::size_t infeasible = 0;      // scenarios priced at +inf
  std::optional<RecourseDecision> recourse;

  bool infinite() const { return value == lp::kInf; }
};

// Recourse model and costs used for an objective: Fuel keeps `network`,
// the other two switch to its shed variant.
ModelVariant oracle_model(ModelVariant network, OracleObjective objective);
RecourseCosts oracle_costs(const GridCase& grid, OracleObjective objective, const LoadShedPrices& prices);

// Maximum over an explicit scenario list. Ties go to the earliest scenario,
// so enumerate_binary order gives the lexicographically smallest maximizer.
// Scenarios are split over `threads` workers.
OracleResult worst_case_over(const GridCase& grid, const CommitmentDecision& commitment,
                             const std::vector<Scenario>& scenarios, ModelVariant model,
                             const RecourseCosts& costs, int threads = 1);

OracleResult brute_force_worst_case(const GridCase& grid, const CommitmentDecision& commitment,
                                    const UncertaintySpec& spec, SetVariant set, ModelVariant network,
                                    const LoadShedPrices& prices, OracleObjective objective,
                                    int threads = 1);

// Every scenario of a continuous set whose fractions are multiples of
// `step`, in lexicographic order of (alpha, gamma).
std::vector<Scenario> grid_scenarios(const UncertaintySpec& spec, SetVariant set, double step = 0.25);

struct BilevelResult {
  // min over first-stage feasible commitments of first-stage cost plus the
  // worst recourse value; +inf when every commitment has an infeasible
  // scenario.
  double value = lp::kInf;
  CommitmentDecision commitment;
  OracleResult worst;
  std::size_t commitments = 0;         // schedules in the first-stage set
  std::size_t robust_feasible = 0;     // of those, finite worst case
};

// Largest on/off table the bilevel oracle accepts (units x periods).
inline constexpr std::size_t kBilevelScheduleLimit = 12;

// Exhaustive min-max over every on/off schedule and every listed scenario.
BilevelResult bilevel_enumeration(const GridCase& grid, const std::vector<Scenario>& scenarios,
                                  ModelVariant model, const RecourseCosts& costs, int threads = 1);

}  // namespace ucro
