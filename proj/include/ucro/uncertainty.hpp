#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ucro/grid.hpp"
#include "ucro/matrix.hpp"

namespace ucro {

// Gas-turbine output multiplier at inlet air temperature `temperature` (F).
// Throws DomainError at 360 F or above, where the factor stops being positive.
double efficiency_factor(double temperature);

enum class SetVariant {
  Full,               // budgets + linking, fractions in [0,1]
  BinaryLinked,       // budgets + linking, fractions in {0,1}
  RelaxedContinuous,  // budgets only, fractions in [0,1]
  RelaxedBinary,      // budgets only, fractions in {0,1}
};

bool is_binary(SetVariant v);
bool has_linking(SetVariant v);
std::string to_string(SetVariant v);
SetVariant parse_set_variant(const std::string& name);

// Budgets, lag and the deviation data of the uncertainty set. Holds its own
// copy of the case bounds so it can outlive the GridCase.
struct UncertaintySpec {
  int budget_temperature = 0;
  int budget_demand = 0;
  int lag = 2;
  std::vector<double> temperature_nominal;
  std::vector<double> temperature_deviation;
  Matrix<double> demand_nominal;    // bus x period
  Matrix<double> demand_deviation;  // bus x period

  static UncertaintySpec from_case(const GridCase& grid, int budget_temperature,
                                   int budget_demand, int lag = 2);

  std::size_t num_periods() const { return temperature_nominal.size(); }
  std::size_t num_buses() const { return demand_nominal.rows(); }
};

struct Scenario {
  std::vector<double> alpha;
  std::vector<double> gamma;
  std::vector<double> realized_temperature;
  Matrix<double> realized_demand;  // bus x period

  // Same (alpha, gamma) within tol.
  bool same_fractions(const Scenario& other, double tol = 1e-9) const;
  // Efficiency factor of each period at the realized temperature.
  std::vector<double> efficiency() const;
};

// Throws DomainError on wrong lengths or fractions outside [0,1].
Scenario realize(const UncertaintySpec& spec, const std::vector<double>& alpha,
                 const std::vector<double>& gamma);
Scenario nominal_scenario(const UncertaintySpec& spec);

struct MembershipReport {
  bool member = true;
  std::vector<std::string> violations;

  explicit operator bool() const { return member; }
};

MembershipReport is_member(const UncertaintySpec& spec, const Scenario& scenario,
                           SetVariant variant);

// Largest horizon enumerate_binary accepts without allow_large.
inline constexpr std::size_t kEnumerationHorizonLimit = 16;

// Visits every binary scenario of the variant exactly once, in lexicographic
// order of (alpha, gamma) with period 1 most significant. Return false from
// the visitor to stop early. Throws GuardError for non-binary variants and
// for long horizons unless allow_large is set.
void for_each_binary(const UncertaintySpec& spec, SetVariant variant,
                     const std::function<bool(const Scenario&)>& visit,
                     bool allow_large = false);
std::vector<Scenario> enumerate_binary(const UncertaintySpec& spec, SetVariant variant,
                                       bool allow_large = false);

// Maps a member of the relaxed binary set into the full set. Demand
// deviations are raised at as few periods as possible to repair broken
// linking constraints within the demand budget; temperature deviations that
// cannot be repaired are dropped. Among repairs with the same L1 change the
// one that keeps more temperature deviations wins. Inputs outside the relaxed
// binary set map to the nominal scenario.
Scenario project_into_full(const UncertaintySpec& spec, const Scenario& scenario);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const UncertaintySpec& spec, const std::string& text);

}  // namespace ucro
