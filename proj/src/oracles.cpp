#include "ucro/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ucro/error.hpp"

namespace ucro {

ModelVariant oracle_model(ModelVariant network, OracleObjective objective) {
  return objective == OracleObjective::Fuel ? network : with_shed(network);
}

RecourseCosts oracle_costs(const GridCase& grid, OracleObjective objective, const LoadShedPrices& prices) {
  switch (objective) {
    case OracleObjective::Fuel: return RecourseCosts::fuel_only();
    case OracleObjective::ShedSum: return RecourseCosts::shed_volume(grid.num_periods());
    case OracleObjective::FuelPlusShed: return RecourseCosts::fuel_and_shed(prices.price_per_period);
  }
  return {};
}

namespace {

struct Priced {
  double value = -lp::kInf;
  std::size_t index = 0;
  std::optional<RecourseDecision> recourse;
  std::size_t infeasible = 0;
};

bool better(double value, std::size_t index, const Priced& best) {
  if (best.value == -lp::kInf) return true;
  if (value == lp::kInf || best.value == lp::kInf) {
    if (value != best.value) return value == lp::kInf;
    return index < best.index;
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(best.value));
  if (value > best.value + tol) return true;
  return value >= best.value - tol && index < best.index;
}

}  // namespace

OracleResult worst_case_over(const GridCase& grid, const CommitmentDecision& commitment,
                             const std::vector<Scenario>& scenarios, ModelVariant model,
                             const RecourseCosts& costs, int threads) {
  if (scenarios.empty()) throw DomainError("worst_case_over: empty scenario list");
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, scenarios.size());
  std::vector<Priced> partial(workers);
  std::vector<std::string> errors(workers);
  auto run = [&](std::size_t w) {
    try {
      lp::SolverConfig config;
      config.threads = 1;
      for (std::size_t j = w; j < scenarios.size(); j += workers) {
        const RecourseResult r = solve_recourse(grid, commitment, scenarios[j], model, costs, config);
        double value;
        if (r.feasible()) {
          value = r.objective;
        } else if (r.status == lp::SolveStatus::Infeasible) {
          value = lp::kInf;
          ++partial[w].infeasible;
        } else {
          throw SolverError("recourse LP returned " + lp::to_string(r.status));
        }
        if (better(value, j, partial[w])) {
          partial[w].value = value;
          partial[w].index = j;
          partial[w].recourse = r.decision;
        }
      }
    } catch (const std::exception& e) {
      errors[w] = e.what();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw SolverError("oracle: " + e);

  Priced best;
  std::size_t infeasible = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    infeasible += partial[w].infeasible;
    if (better(partial[w].value, partial[w].index, best)) best = partial[w];
  }
  OracleResult out;
  out.value = best.value;
  out.scenario_index = best.index;
  out.scenario = scenarios[best.index];
  out.evaluated = scenarios.size();
  out.infeasible = infeasible;
  out.recourse = std::move(best.recourse);
  return out;
}

OracleResult brute_force_worst_case(const GridCase& grid, const CommitmentDecision& commitment,
                                    const UncertaintySpec& spec, SetVariant set, ModelVariant network,
                                    const LoadShedPrices& prices, OracleObjective objective,
                                    int threads) {
  return worst_case_over(grid, commitment, enumerate_binary(spec, set), oracle_model(network, objective),
                         oracle_costs(grid, objective, prices), threads);
}

std::vector<Scenario> grid_scenarios(const UncertaintySpec& spec, SetVariant set, double step) {
  if (is_binary(set)) throw GuardError("grid_scenarios: use enumerate_binary for binary sets");
  if (!(step > 0.0) || step > 1.0) throw DomainError("grid_scenarios: step must be in (0, 1]");
  const int levels = static_cast<int>(std::lround(1.0 / step));
  if (std::abs(levels * step - 1.0) > 1e-12) throw DomainError("grid_scenarios: 1/step must be an integer");
  const std::size_t T = spec.num_periods();
  if (std::pow(levels + 1.0, 2.0 * T) > 5e6) throw GuardError("grid_scenarios: grid too large");

  // Fraction vectors in units of `step` with total at most budget.
  auto vectors = [&](int budget) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(T, 0);
    const int cap = budget * levels;
    auto rec = [&](auto&& self, std::size_t t, int used) -> void {
      if (t == T) {
        out.push_back(cur);
        return;
      }
      for (int k = 0; k <= levels && used + k <= cap; ++k) {
        cur[t] = k;
        self(self, t + 1, used + k);
      }
      cur[t] = 0;
    };
    rec(rec, 0, 0);
    return out;
  };
  const auto alphas = vectors(spec.budget_temperature);
  const auto gammas = vectors(spec.budget_demand);
  std::vector<Scenario> out;
  std::vector<double> a(T), g(T);
  for (const auto& ai : alphas) {
    for (std::size_t t = 0; t < T; ++t) a[t] = ai[t] * step;
    for (const auto& gi : gammas) {
      for (std::size_t t = 0; t < T; ++t) g[t] = gi[t] * step;
      Scenario s = realize(spec, a, g);
      if (is_member(spec, s, set)) out.push_back(std::move(s));
    }
  }
  return out;
}

BilevelResult bilevel_enumeration(const GridCase& grid, const std::vector<Scenario>& scenarios,
                                  ModelVariant model, const RecourseCosts& costs, int threads) {
  const std::size_t I = grid.num_generators(), T = grid.num_periods();
  if (I * T > kBilevelScheduleLimit) throw GuardError("bilevel_enumeration: too many on/off entries");
  BilevelResult best;
  const std::size_t count = std::size_t{1} << (I * T);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Matrix<int> on(I, T);
    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t t = 0; t < T; ++t) on(i, t) = (mask >> (I * T - 1 - (i * T + t))) & 1;
    const CommitmentDecision c = commitment_from_schedule(grid, on);
    if (!first_stage_violation(grid, c).empty()) continue;
    ++best.commitments;
    OracleResult worst = worst_case_over(grid, c, scenarios, model, costs, threads);
    if (worst.infinite()) continue;
    ++best.robust_feasible;
    const double total = first_stage_cost(grid, c) + worst.value;
    if (total < best.value - 1e-9 * std::max(1.0, std::abs(total))) {
      best.value = total;
      best.commitment = c;
      best.worst = std::move(worst);
    }
  }
  return best;
}

}  // namespace ucro
