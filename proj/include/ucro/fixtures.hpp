#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "ucro/grid.hpp"
#include "ucro/uc.hpp"

// Built-in test systems shared by the unit tests, the acceptance suite and
// the CLI verify command.
namespace ucro::fixtures {

struct NamedCase {
  std::string name;
  GridCase grid;
};

// Empty case with `buses` buses and flat data over `periods` periods.
GridCase skeleton(int periods, int buses, double temperature = 60.0, double temperature_deviation = 0.0);
void add_branch(GridCase& grid, int from, int to, double limit, double reactance);
// Startup and shutdown rates default to max(ramp, first breakpoint output).
void add_generator(GridCase& grid, int bus, std::initializer_list<CostBreakpoint> curve,
                   double no_load_cost, double startup_cost, int min_up = 1, int min_down = 1,
                   double ramp = 1e3, bool initial_on = true);
// Rebuilds adjacency and validates.
GridCase finish(GridCase grid);

// One bus, one unit with breakpoints (50, $500) and (100, $1200), demand 60.
GridCase single_bus_case(int periods = 1, double demand = 60.0, double temperature = 60.0);

CommitmentDecision all_on(const GridCase& grid);

// Small cases (|T| <= 4, <= 3 buses, <= 3 units) on which every unit can run
// the whole horizon under every binary scenario.
std::vector<NamedCase> tiny_cases();
// |T| = 2 with at most 2 units, small enough for commitment x scenario
// enumeration.
std::vector<NamedCase> micro_cases();
// Copperplate cases with flat nominal temperature, one common temperature
// deviation and one common relative demand deviation.
std::vector<NamedCase> conforming_copperplate_cases();

// Hourly load fractions and temperatures (F) of a hot summer day.
std::vector<double> summer_day_shape();
std::vector<double> summer_day_temperature();

// 24 periods, 3 buses, 4 units; 15 F temperature and 5% demand deviation.
GridCase scaled_network_case();
// 24 buses, 38 branches, 24 periods, RTS-style topology and loads.
GridCase rts_style_case();
// 24 periods, one bus, identical units whose count at the peak depends on
// the temperature assumption.
GridCase capacity_tight_case();

// Every built-in case by name, including the generated families.
std::vector<NamedCase> all_named_cases();
// Throws DomainError for an unknown name.
GridCase by_name(const std::string& name);

}  // namespace ucro::fixtures
