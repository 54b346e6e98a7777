#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ucro/matrix.hpp"

namespace ucro {

// Units used throughout: power in MW, money in $, temperature in degrees F,
// reactance in per-unit per MW of flow (p.u. on a 100 MVA base divided by
// 100), angles in radians. One period is one hour.

struct Bus {
  int id = 0;
  std::vector<int> attached_generator_ids;
  std::vector<int> outgoing_branch_ids;
  std::vector<int> incoming_branch_ids;

  friend bool operator==(const Bus&, const Bus&) = default;
};

struct Branch {
  int id = 0;
  int origin_bus = 0;
  int destination_bus = 0;
  double flow_limit = 0.0;  // MW
  double reactance = 0.0;   // p.u. per MW

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct CostBreakpoint {
  double output = 0.0;  // MW
  double cost = 0.0;    // $ per period at this output

  friend bool operator==(const CostBreakpoint&, const CostBreakpoint&) = default;
};

// Convex piecewise-linear fuel cost given by its breakpoints. Output between
// breakpoints is priced by convex combination; the first breakpoint is the
// minimum output of a running unit.
struct PiecewiseCost {
  std::vector<CostBreakpoint> breakpoints;

  std::size_t size() const { return breakpoints.size(); }
  double min_output() const { return breakpoints.front().output; }
  double max_output() const { return breakpoints.back().output; }
  // Cost of producing `output` (clamped to the curve's range).
  double evaluate(double output) const;
  // Largest segment slope, $/MW.
  double max_slope() const;

  friend bool operator==(const PiecewiseCost&, const PiecewiseCost&) = default;
};

struct Generator {
  int id = 0;
  int bus = 0;
  int min_up = 1;
  int min_down = 1;
  double ramp_up = 0.0;        // MW per period
  double ramp_down = 0.0;      // MW per period
  double startup_rate = 0.0;   // MW
  double shutdown_rate = 0.0;  // MW
  double no_load_cost = 0.0;   // $ per period on
  double startup_cost = 0.0;   // $ per startup
  PiecewiseCost cost_curve;
  bool initial_on = false;

  friend bool operator==(const Generator&, const Generator&) = default;
};

struct LoadShedPrices {
  std::vector<double> price_per_period;  // $ per MW

  friend bool operator==(const LoadShedPrices&, const LoadShedPrices&) = default;
};

// Static description of the power system over the scheduling horizon.
// Temperatures are system-wide; demands are per bus.
struct GridCase {
  int horizon_length = 0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  Matrix<double> demand_nominal;    // bus x period
  Matrix<double> demand_deviation;  // bus x period
  std::vector<double> temperature_nominal;
  std::vector<double> temperature_deviation;
  LoadShedPrices load_shed_prices;

  std::size_t num_periods() const { return static_cast<std::size_t>(horizon_length); }
  std::size_t num_buses() const { return buses.size(); }
  std::size_t num_branches() const { return branches.size(); }
  std::size_t num_generators() const { return generators.size(); }

  double total_nominal_demand(std::size_t period) const;

  friend bool operator==(const GridCase&, const GridCase&) = default;
};

// Throws ValidationError naming the first violated invariant.
void validate(const GridCase& grid);

// Fills the bus adjacency lists from branch endpoints and generator buses.
void rebuild_adjacency(GridCase& grid);

// Reads and validates a JSON case file.
GridCase load_case(const std::filesystem::path& path);
GridCase parse_case(const std::string& json_text);
void save_case(const GridCase& grid, const std::filesystem::path& path);
std::string dump_case(const GridCase& grid);

// Multiplies nominal demand and its deviation in period t by hourly_shape[t].
GridCase scale_demand_profile(const GridCase& grid, const std::vector<double>& hourly_shape);

}  // namespace ucro
