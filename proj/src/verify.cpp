#include "ucro/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ucro/ccg.hpp"
#include "ucro/error.hpp"
#include "ucro/fixtures.hpp"
#include "ucro/oracles.hpp"
#include "ucro/report.hpp"
#include "ucro/subproblems.hpp"

namespace ucro {

bool VerifyReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed || r.skipped; });
}

std::string VerifyReport::text() const {
  std::ostringstream out;
  for (const auto& r : results)
    out << (r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL") << "  " << r.name
        << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
  out << (passed() ? "all properties hold" : "some properties failed") << "\n";
  return out.str();
}

namespace {

double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

ModelVariant base_model(const GridCase& grid) {
  return grid.num_branches() > 0 ? ModelVariant::Network : ModelVariant::Copperplate;
}

// The grid bilevel oracle prices every schedule at every grid point, so it
// runs only on the smallest cases.
constexpr std::size_t kGridSandwichEntries = 6;

// Budgets used on every case: one period of each kind, lag 1.
UncertaintySpec small_spec(const GridCase& grid) {
  const int T = grid.horizon_length;
  return UncertaintySpec::from_case(grid, 1, 1, std::min(1, T - 1));
}

void add(VerifyReport& report, std::string name, bool passed, std::string detail) {
  report.results.push_back({std::move(name), passed, false, std::move(detail)});
}

void skip(VerifyReport& report, std::string name, std::string why) {
  report.results.push_back({std::move(name), true, true, std::move(why)});
}

}  // namespace

void verify_case(const std::string& label, const GridCase& grid, const VerifyOptions& options,
                 VerifyReport& report) {
  const ModelVariant model = base_model(grid);
  const UncertaintySpec spec = small_spec(grid);
  const std::size_t T = grid.num_periods();
  CcgConfig config;
  config.epsilon = options.epsilon;
  config.time_limit_seconds = options.time_limit_seconds;
  config.model_variant = model;
  config.threads = options.threads;

  if (T > kEnumerationHorizonLimit) {
    skip(report, label + ": subproblem-vs-oracle", "horizon too long to enumerate");
  } else {
    // Compare at the nominal deterministic commitment.
    const auto det = deterministic_uc(grid, nominal_scenario(spec), model, grid.load_shed_prices);
    if (det.status != lp::SolveStatus::Optimal) {
      add(report, label + ": subproblem-vs-oracle", false, "nominal problem " + lp::to_string(det.status));
    } else {
      const auto& c = det.commitment;
      const auto bf = brute_force_worst_case(grid, c, spec, SetVariant::RelaxedBinary, model,
                                             grid.load_shed_prices, OracleObjective::Fuel, options.threads);
      std::ostringstream d;
      bool ok;
      if (bf.infinite()) {
        const auto spf = solve_sp_feasibility(grid, c, spec, SetVariant::RelaxedBinary, model);
        ok = spf.value > 1e-6;
        d << "oracle infeasible, SP^F " << format_number(spf.value);
      } else {
        const auto sp = solve_sp_optimality(grid, c, spec, SetVariant::RelaxedBinary, model);
        const double e = rel_diff(sp.value, bf.value);
        ok = e <= 1e-6 && sp.dual_consistent;
        d << "SP^O " << format_number(sp.value) << " oracle " << format_number(bf.value) << " rel " << format_number(e)
          << " tol 1e-06";
      }
      add(report, label + ": subproblem-vs-oracle", ok, d.str());
    }
  }

  config.set_variant = SetVariant::BinaryLinked;
  const CcgRun b = run_ccg(grid, spec, config, grid.load_shed_prices);
  {
    const auto problems = check_trace(b.state, options.epsilon);
    std::ostringstream d;
    d << b.state.iteration_log.size() << " iterations, " << to_string(b.state.verdict) << ", gap "
      << format_number(b.state.gap());
    for (const auto& p : problems) d << "; " << p;
    const bool finished = b.state.verdict == Termination::GapClosed ||
                          b.state.verdict == Termination::DuplicateScenario ||
                          b.state.verdict == Termination::RepeatedCommitment ||
                          b.state.verdict == Termination::MasterInfeasible;
    add(report, label + ": ccg-trace-invariants", problems.empty() && finished, d.str());
  }

  config.set_variant = SetVariant::RelaxedBinary;
  const CcgRun rb = run_ccg(grid, spec, config, grid.load_shed_prices);
  const double vb = b.solution.objective, vrb = rb.solution.objective;
  {
    const bool ok = vb <= vrb + 1e-6 * std::abs(vrb) || (std::isinf(vb) && std::isinf(vrb));
    add(report, label + ": binary-below-relaxed", ok,
        "V(B) " + format_number(vb) + " V(RB) " + format_number(vrb) + " tol 1e-06 rel");
  }

  if (grid.num_generators() * T <= kGridSandwichEntries) {
    // The 0.25 grid lies between the binary linked set and the full set, so
    // its bilevel value sits between the two C&CG values.
    const auto scenarios = grid_scenarios(spec, SetVariant::Full, 0.25);
    const auto bl = bilevel_enumeration(grid, scenarios, model, RecourseCosts::fuel_only(), options.threads);
    const double tol = 1e-6 * std::max(1.0, std::abs(bl.value));
    const bool ok = vb <= bl.value + tol && bl.value <= vrb + tol;
    add(report, label + ": grid-sandwich", ok,
        "V(B) " + format_number(vb) + " V(grid) " + format_number(bl.value) + " V(RB) " + format_number(vrb));
  } else {
    skip(report, label + ": grid-sandwich", "schedule too large to enumerate");
  }

  if (model == ModelVariant::Copperplate && check_binary_reduction_conditions(grid, spec).holds) {
    const auto c = fixtures::all_on(grid);
    const auto grid_set = grid_scenarios(spec, SetVariant::Full, 0.25);
    const auto g = worst_case_over(grid, c, grid_set, model, RecourseCosts::fuel_only(), options.threads);
    const auto bin = brute_force_worst_case(grid, c, spec, SetVariant::BinaryLinked, model, grid.load_shed_prices,
                                            OracleObjective::Fuel, options.threads);
    const double e = g.infinite() || bin.infinite() ? (g.value == bin.value ? 0.0 : lp::kInf)
                                                    : rel_diff(bin.value, g.value);
    add(report, label + ": binary-reduction-grid", e <= 1e-6,
        "binary " + format_number(bin.value) + " grid " + format_number(g.value) + " rel " + format_number(e));
  }
}

VerifyReport verify_stock(const VerifyOptions& options) {
  VerifyReport report;
  {
    const double r = tilde_cost(1.0, 60.0, 20.0);
    add(report, "tilde-cost-ratio", std::abs(r - 15.0 / 14.0) <= 1e-12, "ratio " + format_number(r));
  }
  std::vector<fixtures::NamedCase> cases;
  for (auto& c : fixtures::tiny_cases()) cases.push_back(std::move(c));
  for (auto& c : fixtures::micro_cases()) cases.push_back(std::move(c));
  for (auto& c : fixtures::conforming_copperplate_cases()) cases.push_back(std::move(c));
  for (const auto& c : cases) verify_case(c.name, c.grid, options, report);
  return report;
}

VerifyReport verify_case_file(const std::filesystem::path& path, const VerifyOptions& options) {
  VerifyReport report;
  GridCase grid;
  try {
    grid = load_case(path);
  } catch (const Error& e) {
    add(report, "case-validation", false, e.what());
    return report;
  }
  add(report, "case-validation", true, path.filename().string());
  verify_case(path.stem().string(), grid, options, report);
  return report;
}

}  // namespace ucro
