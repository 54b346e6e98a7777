#include "ucro/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ucro/error.hpp"

namespace ucro {

double PiecewiseCost::evaluate(double output) const {
  const auto& bp = breakpoints;
  if (output <= bp.front().output) return bp.front().cost;
  for (std::size_t k = 1; k < bp.size(); ++k) {
    if (output <= bp[k].output) {
      const double w = (output - bp[k - 1].output) / (bp[k].output - bp[k - 1].output);
      return bp[k - 1].cost + w * (bp[k].cost - bp[k - 1].cost);
    }
  }
  return bp.back().cost;
}

double PiecewiseCost::max_slope() const {
  double slope = 0.0;
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    slope = std::max(slope, (breakpoints[k].cost - breakpoints[k - 1].cost) /
                                (breakpoints[k].output - breakpoints[k - 1].output));
  }
  return slope;
}

double GridCase::total_nominal_demand(std::size_t period) const {
  double total = 0.0;
  for (std::size_t n = 0; n < num_buses(); ++n) total += demand_nominal(n, period);
  return total;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

std::string at(const char* kind, std::size_t i) {
  std::ostringstream os;
  os << kind << "[" << i << "]";
  return os.str();
}

std::string at(const char* kind, std::size_t r, std::size_t c) {
  std::ostringstream os;
  os << kind << "[" << r << "][" << c << "]";
  return os.str();
}

void check_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) fail(where, "value must be finite");
}

void check_nonneg(double v, const std::string& where) {
  check_finite(v, where);
  if (v < 0.0) fail(where, "value must be >= 0");
}

void validate_curve(const PiecewiseCost& curve, const std::string& where) {
  const auto& bp = curve.breakpoints;
  if (bp.size() < 2) fail(where + ".cost_curve", "PiecewiseCost needs at least 2 breakpoints");
  for (std::size_t k = 0; k < bp.size(); ++k) {
    check_nonneg(bp[k].output, where + ".cost_curve" + at("", k) + ".output");
    check_nonneg(bp[k].cost, where + ".cost_curve" + at("", k) + ".cost");
  }
  double prev_slope = -1.0;
  for (std::size_t k = 1; k < bp.size(); ++k) {
    const std::string here = where + ".cost_curve" + at("", k);
    if (!(bp[k].output > bp[k - 1].output))
      fail(here, "PiecewiseCost output levels must be strictly increasing");
    if (bp[k].cost < bp[k - 1].cost) fail(here, "PiecewiseCost costs must be nondecreasing");
    const double slope = (bp[k].cost - bp[k - 1].cost) / (bp[k].output - bp[k - 1].output);
    if (slope < prev_slope - 1e-9 * std::max(1.0, std::abs(prev_slope)))
      fail(here, "PiecewiseCost must be convex (segment slopes nondecreasing)");
    prev_slope = slope;
  }
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

void rebuild_adjacency(GridCase& grid) {
  for (auto& bus : grid.buses) {
    bus.attached_generator_ids.clear();
    bus.outgoing_branch_ids.clear();
    bus.incoming_branch_ids.clear();
  }
  const auto nb = static_cast<int>(grid.buses.size());
  for (const auto& br : grid.branches) {
    if (br.origin_bus >= 0 && br.origin_bus < nb)
      grid.buses[br.origin_bus].outgoing_branch_ids.push_back(br.id);
    if (br.destination_bus >= 0 && br.destination_bus < nb)
      grid.buses[br.destination_bus].incoming_branch_ids.push_back(br.id);
  }
  for (const auto& g : grid.generators) {
    if (g.bus >= 0 && g.bus < nb) grid.buses[g.bus].attached_generator_ids.push_back(g.id);
  }
}

void validate(const GridCase& grid) {
  if (grid.horizon_length < 1) fail("horizon", "horizon_length must be >= 1");
  const std::size_t T = grid.num_periods();
  if (grid.buses.empty()) fail("buses", "at least one bus is required");
  const auto nb = static_cast<int>(grid.buses.size());

  for (std::size_t n = 0; n < grid.buses.size(); ++n) {
    if (grid.buses[n].id != static_cast<int>(n)) fail(at("buses", n), "Bus id must equal its position");
  }

  for (std::size_t l = 0; l < grid.branches.size(); ++l) {
    const auto& br = grid.branches[l];
    const std::string where = at("branches", l);
    if (br.id != static_cast<int>(l)) fail(where, "Branch id must equal its position");
    if (br.origin_bus < 0 || br.origin_bus >= nb) fail(where, "Branch origin_bus is not a bus");
    if (br.destination_bus < 0 || br.destination_bus >= nb)
      fail(where, "Branch destination_bus is not a bus");
    if (br.origin_bus == br.destination_bus) fail(where, "Branch origin must differ from destination");
    check_finite(br.flow_limit, where + ".flow_limit");
    check_finite(br.reactance, where + ".reactance");
    if (!(br.flow_limit > 0.0)) fail(where, "Branch flow_limit must be > 0");
    if (!(br.reactance > 0.0)) fail(where, "Branch reactance must be > 0");
  }

  if (grid.generators.empty()) fail("generators", "at least one generator is required");
  for (std::size_t i = 0; i < grid.generators.size(); ++i) {
    const auto& g = grid.generators[i];
    const std::string where = at("generators", i);
    if (g.id != static_cast<int>(i)) fail(where, "Generator id must equal its position");
    if (g.bus < 0 || g.bus >= nb) fail(where, "Generator bus is not a bus");
    if (g.min_up < 1) fail(where, "Generator min_up must be >= 1");
    if (g.min_down < 1) fail(where, "Generator min_down must be >= 1");
    check_nonneg(g.ramp_up, where + ".ramp_up");
    check_nonneg(g.ramp_down, where + ".ramp_down");
    check_nonneg(g.startup_rate, where + ".startup_rate");
    check_nonneg(g.shutdown_rate, where + ".shutdown_rate");
    check_nonneg(g.no_load_cost, where + ".no_load_cost");
    check_nonneg(g.startup_cost, where + ".startup_cost");
    validate_curve(g.cost_curve, where);
  }

  auto check_matrix = [&](const Matrix<double>& m, const char* name) {
    if (m.rows() != grid.buses.size() || m.cols() != T)
      fail(name, "matrix must be bus x period");
    for (std::size_t n = 0; n < m.rows(); ++n)
      for (std::size_t t = 0; t < T; ++t) check_nonneg(m(n, t), at(name, n, t));
  };
  check_matrix(grid.demand_nominal, "demand_nominal");
  check_matrix(grid.demand_deviation, "demand_deviation");

  if (grid.temperature_nominal.size() != T)
    fail("temperature_nominal", "length must equal horizon");
  if (grid.temperature_deviation.size() != T)
    fail("temperature_deviation", "length must equal horizon");
  for (std::size_t t = 0; t < T; ++t) {
    check_finite(grid.temperature_nominal[t], at("temperature_nominal", t));
    check_nonneg(grid.temperature_deviation[t], at("temperature_deviation", t));
    if (!(grid.temperature_nominal[t] + grid.temperature_deviation[t] < 360.0))
      fail(at("temperature_nominal", t),
           "temperature_nominal + temperature_deviation must stay below 360");
  }

  if (grid.load_shed_prices.price_per_period.size() != T)
    fail("load_shed_prices", "length must equal horizon");
  for (std::size_t t = 0; t < T; ++t)
    check_nonneg(grid.load_shed_prices.price_per_period[t], at("load_shed_prices", t));

  GridCase derived = grid;
  rebuild_adjacency(derived);
  for (std::size_t n = 0; n < grid.buses.size(); ++n) {
    const auto& have = grid.buses[n];
    const auto& want = derived.buses[n];
    if (sorted(have.outgoing_branch_ids) != sorted(want.outgoing_branch_ids) ||
        sorted(have.incoming_branch_ids) != sorted(want.incoming_branch_ids))
      fail(at("buses", n), "Bus branch adjacency inconsistent with Branch endpoints");
    if (sorted(have.attached_generator_ids) != sorted(want.attached_generator_ids))
      fail(at("buses", n), "Bus generator list inconsistent with Generator buses");
  }
}

GridCase scale_demand_profile(const GridCase& grid, const std::vector<double>& hourly_shape) {
  if (hourly_shape.size() != grid.num_periods())
    throw DomainError("scale_demand_profile: shape length " + std::to_string(hourly_shape.size()) +
                      " does not match horizon " + std::to_string(grid.horizon_length));
  for (double s : hourly_shape) {
    if (!(s > 0.0) || !std::isfinite(s))
      throw DomainError("scale_demand_profile: shape entries must be positive");
  }
  GridCase out = grid;
  for (std::size_t n = 0; n < out.num_buses(); ++n) {
    for (std::size_t t = 0; t < out.num_periods(); ++t) {
      out.demand_nominal(n, t) *= hourly_shape[t];
      out.demand_deviation(n, t) *= hourly_shape[t];
    }
  }
  return out;
}

}  // namespace ucro
