#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ucro/error.hpp"
#include "ucro/grid.hpp"

namespace ucro {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  return v.get<int>();
}

std::vector<int> int_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(integer(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix<double> matrix(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = rows ? (v[0].is_array() ? v[0].size() : 0) : 0;
  Matrix<double> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = number_list(v[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols) throw ValidationError(where + ": rows have unequal lengths");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

json matrix_json(const Matrix<double>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

GridCase from_json(const json& doc) {
  GridCase grid;
  grid.horizon_length = integer(require(doc, "horizon", "case"), "horizon");

  const json& buses = require(doc, "buses", "case");
  if (!buses.is_array()) throw ParseError("buses: expected an array");
  bool explicit_adjacency = false;
  for (std::size_t n = 0; n < buses.size(); ++n) {
    const std::string where = "buses[" + std::to_string(n) + "]";
    Bus bus;
    bus.id = integer(require(buses[n], "id", where), where + ".id");
    if (buses[n].contains("generators")) {
      explicit_adjacency = true;
      bus.attached_generator_ids = int_list(buses[n]["generators"], where + ".generators");
    }
    if (buses[n].contains("outgoing_branches")) {
      explicit_adjacency = true;
      bus.outgoing_branch_ids = int_list(buses[n]["outgoing_branches"], where + ".outgoing_branches");
    }
    if (buses[n].contains("incoming_branches")) {
      explicit_adjacency = true;
      bus.incoming_branch_ids = int_list(buses[n]["incoming_branches"], where + ".incoming_branches");
    }
    grid.buses.push_back(std::move(bus));
  }

  const json& branches = require(doc, "branches", "case");
  if (!branches.is_array()) throw ParseError("branches: expected an array");
  for (std::size_t l = 0; l < branches.size(); ++l) {
    const std::string where = "branches[" + std::to_string(l) + "]";
    const json& b = branches[l];
    Branch br;
    br.id = integer(require(b, "id", where), where + ".id");
    br.origin_bus = integer(require(b, "from", where), where + ".from");
    br.destination_bus = integer(require(b, "to", where), where + ".to");
    br.flow_limit = number(require(b, "flow_limit", where), where + ".flow_limit");
    br.reactance = number(require(b, "reactance", where), where + ".reactance");
    grid.branches.push_back(br);
  }

  const json& gens = require(doc, "generators", "case");
  if (!gens.is_array()) throw ParseError("generators: expected an array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string where = "generators[" + std::to_string(i) + "]";
    const json& g = gens[i];
    Generator gen;
    gen.id = integer(require(g, "id", where), where + ".id");
    gen.bus = integer(require(g, "bus", where), where + ".bus");
    gen.min_up = integer(require(g, "min_up", where), where + ".min_up");
    gen.min_down = integer(require(g, "min_down", where), where + ".min_down");
    gen.ramp_up = number(require(g, "ramp_up", where), where + ".ramp_up");
    gen.ramp_down = number(require(g, "ramp_down", where), where + ".ramp_down");
    gen.startup_rate = number(require(g, "startup_rate", where), where + ".startup_rate");
    gen.shutdown_rate = number(require(g, "shutdown_rate", where), where + ".shutdown_rate");
    gen.no_load_cost = number(require(g, "no_load_cost", where), where + ".no_load_cost");
    gen.startup_cost = number(require(g, "startup_cost", where), where + ".startup_cost");
    const json& flag = require(g, "initial_on", where);
    if (!flag.is_boolean()) throw ParseError(where + ".initial_on: expected a boolean");
    gen.initial_on = flag.get<bool>();
    const json& curve = require(g, "cost_curve", where);
    if (!curve.is_array()) throw ParseError(where + ".cost_curve: expected an array");
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const std::string here = where + ".cost_curve[" + std::to_string(k) + "]";
      auto pair = number_list(curve[k], here);
      if (pair.size() != 2) throw ParseError(here + ": expected [output, cost]");
      gen.cost_curve.breakpoints.push_back({pair[0], pair[1]});
    }
    grid.generators.push_back(std::move(gen));
  }

  grid.demand_nominal = matrix(require(doc, "demand_nominal", "case"), "demand_nominal");
  grid.demand_deviation = matrix(require(doc, "demand_deviation", "case"), "demand_deviation");
  grid.temperature_nominal =
      number_list(require(doc, "temperature_nominal", "case"), "temperature_nominal");
  grid.temperature_deviation =
      number_list(require(doc, "temperature_deviation", "case"), "temperature_deviation");
  grid.load_shed_prices.price_per_period =
      number_list(require(doc, "load_shed_prices", "case"), "load_shed_prices");

  if (!explicit_adjacency) rebuild_adjacency(grid);
  validate(grid);
  return grid;
}

}  // namespace

GridCase parse_case(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("case file is not valid JSON: ") + e.what());
  }
  return from_json(doc);
}

GridCase load_case(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open case file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_case(buffer.str());
}

std::string dump_case(const GridCase& grid) {
  json doc;
  doc["horizon"] = grid.horizon_length;
  doc["buses"] = json::array();
  for (const auto& bus : grid.buses) {
    doc["buses"].push_back({{"id", bus.id},
                            {"generators", bus.attached_generator_ids},
                            {"outgoing_branches", bus.outgoing_branch_ids},
                            {"incoming_branches", bus.incoming_branch_ids}});
  }
  doc["branches"] = json::array();
  for (const auto& br : grid.branches) {
    doc["branches"].push_back({{"id", br.id},
                               {"from", br.origin_bus},
                               {"to", br.destination_bus},
                               {"flow_limit", br.flow_limit},
                               {"reactance", br.reactance}});
  }
  doc["generators"] = json::array();
  for (const auto& g : grid.generators) {
    json curve = json::array();
    for (const auto& bp : g.cost_curve.breakpoints) curve.push_back({bp.output, bp.cost});
    doc["generators"].push_back({{"id", g.id},
                                 {"bus", g.bus},
                                 {"min_up", g.min_up},
                                 {"min_down", g.min_down},
                                 {"ramp_up", g.ramp_up},
                                 {"ramp_down", g.ramp_down},
                                 {"startup_rate", g.startup_rate},
                                 {"shutdown_rate", g.shutdown_rate},
                                 {"no_load_cost", g.no_load_cost},
                                 {"startup_cost", g.startup_cost},
                                 {"initial_on", g.initial_on},
                                 {"cost_curve", curve}});
  }
  doc["demand_nominal"] = matrix_json(grid.demand_nominal);
  doc["demand_deviation"] = matrix_json(grid.demand_deviation);
  doc["temperature_nominal"] = grid.temperature_nominal;
  doc["temperature_deviation"] = grid.temperature_deviation;
  doc["load_shed_prices"] = grid.load_shed_prices.price_per_period;
  return doc.dump(2);
}

void save_case(const GridCase& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write case file " + path.string());
  out << dump_case(grid) << '\n';
}

}  // namespace ucro
