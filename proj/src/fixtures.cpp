#include "ucro/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "ucro/error.hpp"
#include "ucro/uncertainty.hpp"

namespace ucro::fixtures {

GridCase skeleton(int periods, int buses, double temperature, double temperature_deviation) {
  GridCase g;
  g.horizon_length = periods;
  for (int n = 0; n < buses; ++n) g.buses.push_back(Bus{n, {}, {}, {}});
  g.demand_nominal = Matrix<double>(buses, periods, 0.0);
  g.demand_deviation = Matrix<double>(buses, periods, 0.0);
  g.temperature_nominal.assign(periods, temperature);
  g.temperature_deviation.assign(periods, temperature_deviation);
  g.load_shed_prices.price_per_period.assign(periods, 1000.0);
  return g;
}

void add_branch(GridCase& grid, int from, int to, double limit, double reactance) {
  grid.branches.push_back(Branch{static_cast<int>(grid.branches.size()), from, to, limit, reactance});
}

void add_generator(GridCase& grid, int bus, std::initializer_list<CostBreakpoint> curve,
                   double no_load_cost, double startup_cost, int min_up, int min_down, double ramp,
                   bool initial_on) {
  Generator g;
  g.id = static_cast<int>(grid.generators.size());
  g.bus = bus;
  g.min_up = min_up;
  g.min_down = min_down;
  g.cost_curve.breakpoints = curve;
  g.ramp_up = g.ramp_down = ramp;
  g.startup_rate = g.shutdown_rate = std::max(ramp, g.cost_curve.min_output());
  g.no_load_cost = no_load_cost;
  g.startup_cost = startup_cost;
  g.initial_on = initial_on;
  grid.generators.push_back(g);
}

GridCase finish(GridCase grid) {
  rebuild_adjacency(grid);
  validate(grid);
  return grid;
}

GridCase single_bus_case(int periods, double demand, double temperature) {
  GridCase g = skeleton(periods, 1, temperature);
  add_generator(g, 0, {{50, 500}, {100, 1200}}, 0.0, 0.0);
  for (int t = 0; t < periods; ++t) g.demand_nominal(0, t) = demand;
  return finish(g);
}

CommitmentDecision all_on(const GridCase& grid) {
  return commitment_from_schedule(grid, Matrix<int>(grid.num_generators(), grid.num_periods(), 1));
}

namespace {

double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Worst demand over periods after deviation, divided by the worst efficiency.
double stressed_peak(const GridCase& g) {
  double peak = 0.0;
  for (std::size_t t = 0; t < g.num_periods(); ++t) {
    double total = 0.0;
    for (std::size_t n = 0; n < g.num_buses(); ++n) total += g.demand_nominal(n, t) + g.demand_deviation(n, t);
    peak = std::max(peak, total / efficiency_factor(g.temperature_nominal[t] + g.temperature_deviation[t]));
  }
  return peak;
}

struct RandomShape {
  int periods, buses, units;
  double demand_lo, demand_hi;
  double headroom;       // installed capacity over stressed peak
  bool mixed_initial;    // some units start off
  int max_min_up;
};

GridCase random_case(unsigned seed, const RandomShape& shape) {
  std::mt19937 rng(seed);
  GridCase g = skeleton(shape.periods, shape.buses);
  for (int t = 0; t < shape.periods; ++t) {
    g.temperature_nominal[t] = std::round(uniform(rng, 55.0, 90.0));
    g.temperature_deviation[t] = std::round(uniform(rng, 5.0, 25.0));
    g.load_shed_prices.price_per_period[t] = std::round(uniform(rng, 200.0, 400.0));
  }
  for (int n = 0; n < shape.buses; ++n) {
    const double rel = uniform(rng, 0.05, 0.2);
    for (int t = 0; t < shape.periods; ++t) {
      g.demand_nominal(n, t) = std::round(uniform(rng, shape.demand_lo, shape.demand_hi));
      g.demand_deviation(n, t) = std::round(rel * g.demand_nominal(n, t) * 10.0) / 10.0;
    }
  }
  double total_demand = 0.0;
  for (int n = 0; n < shape.buses; ++n)
    for (int t = 0; t < shape.periods; ++t) total_demand = std::max(total_demand, g.demand_nominal(n, t) + g.demand_deviation(n, t));
  total_demand *= shape.buses;
  for (int a = 0; a + 1 < shape.buses; ++a)
    add_branch(g, a, a + 1, std::round(total_demand), std::round(uniform(rng, 0.05, 0.3) * 100.0) / 1e4);
  if (shape.buses == 3) add_branch(g, 0, 2, std::round(total_demand), 0.002);

  const double capacity = shape.headroom * stressed_peak(g);
  std::vector<double> share(shape.units);
  for (double& s : share) s = uniform(rng, 0.5, 1.5);
  double share_sum = 0.0;
  for (double s : share) share_sum += s;
  for (int i = 0; i < shape.units; ++i) {
    const double pmax = std::round(capacity * share[i] / share_sum);
    const double pmin = std::round(uniform(rng, 2.0, 6.0));
    const double c0 = std::round(uniform(rng, 20.0, 80.0));
    const double s1 = std::round(uniform(rng, 10.0, 30.0));
    const double s2 = s1 + std::round(uniform(rng, 2.0, 15.0));
    const double mid = std::round((pmin + pmax) / 2.0);
    const int bus = pick(rng, 0, shape.buses - 1);
    const double no_load = std::round(uniform(rng, 20.0, 120.0));
    const double startup = std::round(uniform(rng, 0.0, 150.0));
    const int min_up = pick(rng, 1, shape.max_min_up);
    const int min_down = pick(rng, 1, shape.max_min_up);
    const bool initial_on = shape.mixed_initial ? pick(rng, 0, 1) == 1 : true;
    add_generator(g, bus,
                  {{pmin, c0}, {mid, c0 + s1 * (mid - pmin)}, {pmax, c0 + s1 * (mid - pmin) + s2 * (pmax - mid)}},
                  no_load, startup, min_up, min_down, pmax, initial_on);
  }
  return finish(g);
}

}  // namespace

std::vector<NamedCase> tiny_cases() {
  std::vector<NamedCase> out;
  const std::array<std::array<int, 3>, 10> shapes = {{
      {2, 1, 1}, {2, 1, 2}, {3, 1, 2}, {3, 2, 2}, {4, 1, 3},
      {2, 2, 3}, {3, 3, 3}, {4, 2, 2}, {3, 2, 1}, {4, 3, 2},
  }};
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const RandomShape shape{shapes[k][0], shapes[k][1], shapes[k][2], 20.0, 60.0, 1.4, false, 1};
    out.push_back({"tiny-" + std::to_string(k + 1), random_case(101 + static_cast<unsigned>(k), shape)});
  }

  // Two buses, cheap unit behind a line that binds at high demand.
  GridCase tl = skeleton(3, 2, 70.0, 20.0);
  add_branch(tl, 0, 1, 45.0, 0.001);
  add_generator(tl, 0, {{5, 50}, {120, 1200}}, 40.0, 0.0);
  add_generator(tl, 1, {{5, 150}, {80, 3150}}, 60.0, 0.0);
  const double load[3] = {40.0, 55.0, 48.0};
  for (int t = 0; t < 3; ++t) {
    tl.demand_nominal(1, t) = load[t];
    tl.demand_deviation(1, t) = 0.1 * load[t];
    tl.demand_nominal(0, t) = 10.0;
    tl.demand_deviation(0, t) = 1.0;
  }
  out.push_back({"tight-line", finish(tl)});

  // Ramp limits couple the periods.
  GridCase rl = skeleton(4, 1, 75.0, 15.0);
  add_generator(rl, 0, {{10, 100}, {60, 700}, {90, 1300}}, 30.0, 0.0, 1, 1, 25.0);
  add_generator(rl, 0, {{5, 200}, {50, 1700}}, 20.0, 0.0, 1, 1, 50.0);
  const double ramp_load[4] = {40.0, 70.0, 95.0, 60.0};
  for (int t = 0; t < 4; ++t) {
    rl.demand_nominal(0, t) = ramp_load[t];
    rl.demand_deviation(0, t) = 0.08 * ramp_load[t];
  }
  out.push_back({"ramp-limited", finish(rl)});
  return out;
}

std::vector<NamedCase> micro_cases() {
  std::vector<NamedCase> out;
  const std::array<std::array<int, 2>, 5> shapes = {{{1, 1}, {1, 2}, {2, 2}, {2, 1}, {2, 2}}};
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const RandomShape shape{2, shapes[k][0], shapes[k][1], 10.0, 50.0, 1.3, true, 2};
    out.push_back({"micro-" + std::to_string(k + 1), random_case(501 + static_cast<unsigned>(k), shape)});
  }

  // Cheap large unit that is off at the start and must stay up two periods
  // once started, against a pricier small unit that is already running.
  GridCase m = skeleton(2, 1, 80.0, 15.0);
  add_generator(m, 0, {{5, 30}, {60, 580}}, 150.0, 100.0, 2, 1, 60.0, false);
  add_generator(m, 0, {{2, 40}, {40, 1560}}, 10.0, 0.0, 1, 1, 40.0, true);
  m.demand_nominal(0, 0) = 25.0;
  m.demand_nominal(0, 1) = 34.0;
  m.demand_deviation(0, 0) = 3.0;
  m.demand_deviation(0, 1) = 4.0;
  out.push_back({"micro-startup", finish(m)});
  return out;
}

std::vector<NamedCase> conforming_copperplate_cases() {
  std::vector<NamedCase> out;
  struct Shape {
    int periods, buses, units;
    double temperature, deviation, rel;
  };
  const std::array<Shape, 6> shapes = {{
      {2, 1, 1, 70.0, 15.0, 0.05},
      {2, 2, 2, 80.0, 20.0, 0.10},
      {3, 1, 2, 65.0, 15.0, 0.05},
      {3, 2, 3, 75.0, 10.0, 0.15},
      {2, 1, 3, 90.0, 25.0, 0.20},
      {3, 1, 1, 60.0, 15.0, 0.10},
  }};
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const Shape& s = shapes[k];
    std::mt19937 rng(901 + static_cast<unsigned>(k));
    GridCase g = skeleton(s.periods, s.buses, s.temperature, s.deviation);
    for (int n = 0; n < s.buses; ++n)
      for (int t = 0; t < s.periods; ++t) {
        g.demand_nominal(n, t) = std::round(uniform(rng, 20.0, 60.0));
        g.demand_deviation(n, t) = s.rel * g.demand_nominal(n, t);
      }
    const double capacity = 1.3 * stressed_peak(g);
    for (int i = 0; i < s.units; ++i) {
      const double pmax = std::round(capacity / s.units * uniform(rng, 0.8, 1.2));
      const double pmin = std::round(uniform(rng, 2.0, 5.0));
      const double c0 = std::round(uniform(rng, 20.0, 60.0));
      const double s1 = std::round(uniform(rng, 10.0, 25.0));
      const double s2 = s1 + std::round(uniform(rng, 3.0, 12.0));
      const double mid = std::round((pmin + pmax) / 2.0);
      add_generator(g, pick(rng, 0, s.buses - 1),
                    {{pmin, c0}, {mid, c0 + s1 * (mid - pmin)}, {pmax, c0 + s1 * (mid - pmin) + s2 * (pmax - mid)}},
                    std::round(uniform(rng, 20.0, 80.0)), 0.0, 1, 1, pmax, true);
    }
    out.push_back({"copperplate-" + std::to_string(k + 1), finish(g)});
  }
  return out;
}

std::vector<double> summer_day_shape() {
  return {0.62, 0.58, 0.56, 0.55, 0.56, 0.60, 0.67, 0.74, 0.80, 0.85, 0.89, 0.93,
          0.96, 0.98, 1.00, 1.00, 0.99, 0.97, 0.94, 0.91, 0.86, 0.79, 0.72, 0.66};
}

std::vector<double> summer_day_temperature() {
  return {79, 78, 78, 77, 77, 77, 78, 80, 83, 86, 88, 90, 91, 92, 93, 93, 92, 90, 88, 86, 84, 82, 81, 80};
}

GridCase scaled_network_case() {
  GridCase g = skeleton(24, 3);
  g.temperature_nominal = summer_day_temperature();
  g.temperature_deviation.assign(24, 15.0);
  g.load_shed_prices.price_per_period.assign(24, 500.0);
  const double peak[3] = {0.0, 160.0, 140.0};
  for (int n = 0; n < 3; ++n)
    for (int t = 0; t < 24; ++t) {
      g.demand_nominal(n, t) = peak[n];
      g.demand_deviation(n, t) = 0.05 * peak[n];
    }
  g = scale_demand_profile(g, summer_day_shape());
  add_branch(g, 0, 1, 200.0, 0.0010);
  add_branch(g, 1, 2, 120.0, 0.0012);
  add_branch(g, 0, 2, 200.0, 0.0015);
  add_generator(g, 0, {{60, 1200}, {200, 3790}}, 300, 600, 3, 3, 100, true);
  add_generator(g, 1, {{30, 900}, {110, 2800}}, 200, 300, 2, 2, 60, false);
  add_generator(g, 2, {{20, 700}, {90, 2500}}, 150, 200, 2, 2, 60, false);
  add_generator(g, 2, {{10, 500}, {60, 2100}}, 80, 100, 1, 1, 40, false);
  return finish(g);
}

GridCase rts_style_case() {
  GridCase g = skeleton(24, 24);
  g.temperature_nominal = summer_day_temperature();
  g.temperature_deviation.assign(24, 15.0);
  g.load_shed_prices.price_per_period.assign(24, 500.0);
  const double load[24] = {108, 97, 180, 74, 71, 136, 125, 171, 175, 195, 0, 0,
                           265, 194, 317, 100, 0, 333, 181, 128, 0, 0, 0, 0};
  for (int n = 0; n < 24; ++n)
    for (int t = 0; t < 24; ++t) {
      g.demand_nominal(n, t) = load[n];
      g.demand_deviation(n, t) = 0.05 * load[n];
    }
  g = scale_demand_profile(g, summer_day_shape());
  struct Line {
    int from, to;
    double x, limit;
  };
  // Reactances are per unit on a 100 MVA base; the flow row takes MW, so
  // they are divided by 100.
  const Line lines[38] = {
      {1, 2, 0.0139, 175},  {1, 3, 0.2112, 175},  {1, 5, 0.0845, 175},  {2, 4, 0.1267, 175},
      {2, 6, 0.1920, 175},  {3, 9, 0.1190, 175},  {3, 24, 0.0839, 400}, {4, 9, 0.1037, 175},
      {5, 10, 0.0883, 175}, {6, 10, 0.0605, 175}, {7, 8, 0.0614, 175},  {8, 9, 0.1651, 175},
      {8, 10, 0.1651, 175}, {9, 11, 0.0839, 400}, {9, 12, 0.0839, 400}, {10, 11, 0.0839, 400},
      {10, 12, 0.0839, 400}, {11, 13, 0.0476, 500}, {11, 14, 0.0418, 500}, {12, 13, 0.0476, 500},
      {12, 23, 0.0966, 500}, {13, 23, 0.0865, 500}, {14, 16, 0.0389, 500}, {15, 16, 0.0173, 500},
      {15, 21, 0.0490, 500}, {15, 21, 0.0490, 500}, {15, 24, 0.0519, 500}, {16, 17, 0.0259, 500},
      {16, 19, 0.0231, 500}, {17, 18, 0.0144, 500}, {17, 22, 0.1053, 500}, {18, 21, 0.0259, 500},
      {18, 21, 0.0259, 500}, {19, 20, 0.0396, 500}, {19, 20, 0.0396, 500}, {20, 23, 0.0216, 500},
      {20, 23, 0.0216, 500}, {21, 22, 0.0678, 500},
  };
  for (const Line& l : lines) add_branch(g, l.from - 1, l.to - 1, l.limit, l.x / 100.0);
  struct Unit {
    int bus;
    double pmin, pmax, c0, slope, no_load, startup;
    int up;
  };
  const Unit units[10] = {
      {1, 62, 192, 1400, 20, 250, 500, 3},  {2, 62, 192, 1450, 21, 250, 500, 3},
      {7, 75, 300, 2300, 24, 300, 700, 4},  {13, 207, 591, 4300, 22, 500, 1200, 5},
      {15, 54, 215, 1300, 26, 200, 400, 3}, {16, 54, 155, 1200, 19, 180, 300, 3},
      {18, 100, 400, 1500, 6, 400, 1500, 8}, {21, 100, 400, 1550, 6, 400, 1500, 8},
      {22, 50, 300, 100, 1, 50, 100, 1},     {23, 240, 660, 3800, 17, 450, 1100, 6},
  };
  for (const Unit& u : units) {
    const double mid = std::round((u.pmin + u.pmax) / 2.0);
    const double c_mid = u.c0 + u.slope * (mid - u.pmin);
    add_generator(g, u.bus - 1, {{u.pmin, u.c0}, {mid, c_mid}, {u.pmax, c_mid + 1.2 * u.slope * (u.pmax - mid)}},
                  u.no_load, u.startup, u.up, u.up, u.pmax / 2.0, u.up >= 5);
  }
  return finish(g);
}

GridCase capacity_tight_case() {
  GridCase g = skeleton(24, 1);
  g.temperature_nominal = summer_day_temperature();
  g.temperature_deviation.assign(24, 15.0);
  g.load_shed_prices.price_per_period.assign(24, 500.0);
  const std::vector<double> shape = summer_day_shape();
  for (int t = 0; t < 24; ++t) {
    g.demand_nominal(0, t) = 260.0 * shape[t];
    g.demand_deviation(0, t) = 0.05 * g.demand_nominal(0, t);
  }
  for (int i = 0; i < 5; ++i) add_generator(g, 0, {{10, 300}, {100, 2100}}, 500.0, 0.0, 1, 1, 100.0, i < 2);
  return finish(g);
}

std::vector<NamedCase> all_named_cases() {
  std::vector<NamedCase> out = {{"single-bus", single_bus_case()},
                                {"scaled-network", scaled_network_case()},
                                {"rts-style", rts_style_case()},
                                {"capacity-tight", capacity_tight_case()}};
  for (auto family : {tiny_cases, micro_cases, conforming_copperplate_cases})
    for (auto& c : family()) out.push_back(std::move(c));
  return out;
}

GridCase by_name(const std::string& name) {
  for (auto& c : all_named_cases())
    if (c.name == name) return std::move(c.grid);
  throw DomainError("unknown fixture '" + name + "'");
}

}  // namespace ucro::fixtures
