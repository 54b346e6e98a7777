#include "ucro/uncertainty.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ucro/error.hpp"

namespace ucro {

namespace {

constexpr double kBinaryTol = 1e-9;
constexpr double kSumTol = 1e-9;

bool near_binary(double v) {
  return std::abs(v) <= kBinaryTol || std::abs(v - 1.0) <= kBinaryTol;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

double efficiency_factor(double temperature) {
  if (!(temperature < 360.0))
    throw DomainError("efficiency_factor: temperature " + std::to_string(temperature) +
                      " F is not below 360 F");
  return 1.2 - temperature / 300.0;
}

bool is_binary(SetVariant v) {
  return v == SetVariant::BinaryLinked || v == SetVariant::RelaxedBinary;
}

bool has_linking(SetVariant v) { return v == SetVariant::Full || v == SetVariant::BinaryLinked; }

std::string to_string(SetVariant v) {
  switch (v) {
    case SetVariant::Full: return "full";
    case SetVariant::BinaryLinked: return "binary";
    case SetVariant::RelaxedContinuous: return "relaxed";
    case SetVariant::RelaxedBinary: return "relaxed-binary";
  }
  return "?";
}

SetVariant parse_set_variant(const std::string& name) {
  if (name == "full") return SetVariant::Full;
  if (name == "binary" || name == "B") return SetVariant::BinaryLinked;
  if (name == "relaxed" || name == "R") return SetVariant::RelaxedContinuous;
  if (name == "relaxed-binary" || name == "RB") return SetVariant::RelaxedBinary;
  throw DomainError("unknown set variant '" + name + "'");
}

UncertaintySpec UncertaintySpec::from_case(const GridCase& grid, int budget_temperature,
                                           int budget_demand, int lag) {
  if (budget_temperature < 0 || budget_demand < 0)
    throw DomainError("uncertainty budgets must be >= 0");
  if (lag < 0 || lag >= grid.horizon_length)
    throw DomainError("lag must satisfy 0 <= lag < horizon");
  UncertaintySpec spec;
  spec.budget_temperature = budget_temperature;
  spec.budget_demand = budget_demand;
  spec.lag = lag;
  spec.temperature_nominal = grid.temperature_nominal;
  spec.temperature_deviation = grid.temperature_deviation;
  spec.demand_nominal = grid.demand_nominal;
  spec.demand_deviation = grid.demand_deviation;
  return spec;
}

bool Scenario::same_fractions(const Scenario& other, double tol) const {
  if (alpha.size() != other.alpha.size() || gamma.size() != other.gamma.size()) return false;
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    if (std::abs(alpha[t] - other.alpha[t]) > tol) return false;
    if (std::abs(gamma[t] - other.gamma[t]) > tol) return false;
  }
  return true;
}

std::vector<double> Scenario::efficiency() const {
  std::vector<double> e(realized_temperature.size());
  for (std::size_t t = 0; t < e.size(); ++t) e[t] = efficiency_factor(realized_temperature[t]);
  return e;
}

Scenario realize(const UncertaintySpec& spec, const std::vector<double>& alpha,
                 const std::vector<double>& gamma) {
  const std::size_t T = spec.num_periods();
  if (alpha.size() != T || gamma.size() != T)
    throw DomainError("realize: alpha and gamma must have one entry per period");
  for (std::size_t t = 0; t < T; ++t) {
    if (!(alpha[t] >= 0.0 && alpha[t] <= 1.0) || !(gamma[t] >= 0.0 && gamma[t] <= 1.0))
      throw DomainError("realize: fraction outside [0,1] at period " + std::to_string(t + 1));
  }
  Scenario s;
  s.alpha = alpha;
  s.gamma = gamma;
  s.realized_temperature.resize(T);
  for (std::size_t t = 0; t < T; ++t)
    s.realized_temperature[t] = spec.temperature_nominal[t] + alpha[t] * spec.temperature_deviation[t];
  s.realized_demand = Matrix<double>(spec.num_buses(), T);
  for (std::size_t n = 0; n < spec.num_buses(); ++n)
    for (std::size_t t = 0; t < T; ++t)
      s.realized_demand(n, t) = spec.demand_nominal(n, t) + gamma[t] * spec.demand_deviation(n, t);
  return s;
}

Scenario nominal_scenario(const UncertaintySpec& spec) {
  const std::vector<double> zero(spec.num_periods(), 0.0);
  return realize(spec, zero, zero);
}

MembershipReport is_member(const UncertaintySpec& spec, const Scenario& scenario,
                           SetVariant variant) {
  MembershipReport report;
  auto violate = [&](std::string what) {
    report.member = false;
    report.violations.push_back(std::move(what));
  };
  const std::size_t T = spec.num_periods();
  if (scenario.alpha.size() != T || scenario.gamma.size() != T) {
    violate("dimension: alpha/gamma length differs from horizon");
    return report;
  }
  for (std::size_t t = 0; t < T; ++t) {
    const double a = scenario.alpha[t];
    const double g = scenario.gamma[t];
    if (a < -kBinaryTol || a > 1.0 + kBinaryTol)
      violate("range: alpha[" + std::to_string(t + 1) + "] outside [0,1]");
    if (g < -kBinaryTol || g > 1.0 + kBinaryTol)
      violate("range: gamma[" + std::to_string(t + 1) + "] outside [0,1]");
    if (is_binary(variant)) {
      if (!near_binary(a)) violate("binary: alpha[" + std::to_string(t + 1) + "] not in {0,1}");
      if (!near_binary(g)) violate("binary: gamma[" + std::to_string(t + 1) + "] not in {0,1}");
    }
  }
  if (sum(scenario.alpha) > spec.budget_temperature + kSumTol)
    violate("budget: sum(alpha) exceeds temperature budget");
  if (sum(scenario.gamma) > spec.budget_demand + kSumTol)
    violate("budget: sum(gamma) exceeds demand budget");
  if (has_linking(variant)) {
    const std::size_t l = static_cast<std::size_t>(spec.lag);
    for (std::size_t t = 0; t + l < T; ++t) {
      double window = 0.0;
      for (std::size_t tau = t; tau <= t + l; ++tau) window += scenario.gamma[tau];
      if (window < scenario.alpha[t] - kSumTol)
        violate("linking: gamma window from period " + std::to_string(t + 1) +
                " is below alpha[" + std::to_string(t + 1) + "]");
    }
  }
  return report;
}

void for_each_binary(const UncertaintySpec& spec, SetVariant variant,
                     const std::function<bool(const Scenario&)>& visit, bool allow_large) {
  if (!is_binary(variant))
    throw GuardError("enumerate_binary: set variant " + to_string(variant) + " is not binary");
  const std::size_t T = spec.num_periods();
  if (T > kEnumerationHorizonLimit && !allow_large)
    throw GuardError("enumerate_binary: horizon " + std::to_string(T) + " exceeds limit " +
                     std::to_string(kEnumerationHorizonLimit));
  if (T >= 31) throw GuardError("enumerate_binary: horizon too large to enumerate");

  // Bit (T-1-t) holds period t, so increasing masks are lexicographic.
  auto to_vector = [T](unsigned mask) {
    std::vector<double> v(T);
    for (std::size_t t = 0; t < T; ++t) v[t] = (mask >> (T - 1 - t)) & 1u ? 1.0 : 0.0;
    return v;
  };
  std::vector<unsigned> alphas, gammas;
  const unsigned count = 1u << T;
  for (unsigned m = 0; m < count; ++m) {
    const int bits = std::popcount(m);
    if (bits <= spec.budget_temperature) alphas.push_back(m);
    if (bits <= spec.budget_demand) gammas.push_back(m);
  }
  const std::size_t l = static_cast<std::size_t>(spec.lag);
  for (unsigned am : alphas) {
    const auto alpha = to_vector(am);
    for (unsigned gm : gammas) {
      const auto gamma = to_vector(gm);
      if (has_linking(variant)) {
        bool ok = true;
        for (std::size_t t = 0; ok && t + l < T; ++t) {
          if (alpha[t] == 0.0) continue;
          double window = 0.0;
          for (std::size_t tau = t; tau <= t + l; ++tau) window += gamma[tau];
          ok = window >= 1.0;
        }
        if (!ok) continue;
      }
      if (!visit(realize(spec, alpha, gamma))) return;
    }
  }
}

std::vector<Scenario> enumerate_binary(const UncertaintySpec& spec, SetVariant variant,
                                       bool allow_large) {
  std::vector<Scenario> out;
  for_each_binary(
      spec, variant,
      [&](const Scenario& s) {
        out.push_back(s);
        return true;
      },
      allow_large);
  return out;
}

Scenario project_into_full(const UncertaintySpec& spec, const Scenario& scenario) {
  if (!is_member(spec, scenario, SetVariant::RelaxedBinary)) return nominal_scenario(spec);
  if (is_member(spec, scenario, SetVariant::Full)) return scenario;

  const std::size_t T = spec.num_periods();
  const std::size_t l = static_cast<std::size_t>(spec.lag);
  std::vector<double> alpha(T), gamma(T);
  for (std::size_t t = 0; t < T; ++t) {
    alpha[t] = std::round(scenario.alpha[t]);
    gamma[t] = std::round(scenario.gamma[t]);
  }

  std::vector<std::size_t> starts;
  for (std::size_t t = 0; t + l < T; ++t) {
    if (alpha[t] == 0.0) continue;
    double window = 0.0;
    for (std::size_t tau = t; tau <= t + l; ++tau) window += gamma[tau];
    if (window < 1.0) starts.push_back(t);
  }
  const std::size_t m = starts.size();
  const int spare = spec.budget_demand - static_cast<int>(std::lround(sum(gamma)));
  const std::size_t k = static_cast<std::size_t>(std::max(0, spare));

  // Every window has the same length, so an optimal repair covers runs of
  // consecutive broken starts, each run by one raise at its last start.
  // best[i][j]: first i starts decided, j raises used; score is
  // (covered - raises, covered), compared lexicographically.
  struct Cell {
    bool reachable = false;
    long net = 0;
    long covered = 0;
    std::size_t prev_i = 0;
    bool raised = false;
  };
  std::vector<std::vector<Cell>> best(m + 1, std::vector<Cell>(k + 1));
  best[0][0].reachable = true;
  auto better = [](long net, long cov, const Cell& c) {
    return !c.reachable || net > c.net || (net == c.net && cov > c.covered);
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= k; ++j) {
      const Cell& cur = best[i][j];
      if (!cur.reachable) continue;
      if (better(cur.net, cur.covered, best[i + 1][j])) {
        best[i + 1][j] = {true, cur.net, cur.covered, i, false};
      }
      if (j == k) continue;
      for (std::size_t e = i; e < m && starts[e] - starts[i] <= l; ++e) {
        const long cov = static_cast<long>(e - i + 1);
        const long net = cur.net + cov - 1;
        if (better(net, cur.covered + cov, best[e + 1][j + 1])) {
          best[e + 1][j + 1] = {true, net, cur.covered + cov, i, true};
        }
      }
    }
  }
  std::size_t bj = 0;
  for (std::size_t j = 1; j <= k; ++j) {
    const Cell& c = best[m][j];
    const Cell& b = best[m][bj];
    if (c.reachable && (c.net > b.net || (c.net == b.net && c.covered > b.covered))) bj = j;
  }
  std::vector<bool> covered(m, false);
  for (std::size_t i = m, j = bj; i > 0;) {
    const Cell& c = best[i][j];
    if (c.raised) {
      for (std::size_t q = c.prev_i; q < i; ++q) covered[q] = true;
      gamma[starts[i - 1]] = 1.0;
      --j;
    }
    i = c.prev_i;
  }
  for (std::size_t q = 0; q < m; ++q)
    if (!covered[q]) alpha[starts[q]] = 0.0;
  return realize(spec, alpha, gamma);
}

std::string scenario_to_json(const Scenario& scenario) {
  nlohmann::json doc;
  doc["alpha"] = scenario.alpha;
  doc["gamma"] = scenario.gamma;
  doc["temperature"] = scenario.realized_temperature;
  nlohmann::json demand = nlohmann::json::array();
  for (std::size_t n = 0; n < scenario.realized_demand.rows(); ++n) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t t = 0; t < scenario.realized_demand.cols(); ++t)
      row.push_back(scenario.realized_demand(n, t));
    demand.push_back(std::move(row));
  }
  doc["demand"] = std::move(demand);
  return doc.dump();
}

Scenario scenario_from_json(const UncertaintySpec& spec, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    return realize(spec, doc.at("alpha").get<std::vector<double>>(),
                   doc.at("gamma").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
}

}  // namespace ucro
