// Command-line front end: solve, sweep, verify, export.
#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ucro/ccg.hpp"
#include "ucro/error.hpp"
#include "ucro/fixtures.hpp"
#include "ucro/report.hpp"
#include "ucro/verify.hpp"

namespace fs = std::filesystem;
using namespace ucro;

namespace {

struct RunConfig {
  std::string case_name;
  std::string variant = "network";
  std::string set = "full";
  int gamma_a = 0;
  int gamma_d = 0;
  int lag = 2;
  double epsilon = 0.005;
  double time_limit = 3600.0;
  int jobs = 1;
  unsigned seed = 0;
  std::string out = "out";
  bool timings = true;
};

// A path to a case file, or the name of a built-in fixture.
GridCase resolve_case(const std::string& name) {
  if (fs::exists(name)) return load_case(name);
  return fixtures::by_name(name);
}

CcgConfig ccg_config(const RunConfig& rc) {
  CcgConfig c;
  c.epsilon = rc.epsilon;
  c.time_limit_seconds = rc.time_limit;
  c.model_variant = parse_model_variant(rc.variant);
  c.set_variant = parse_set_variant(rc.set);
  c.threads = 1;
  c.seed = rc.seed;
  c.subproblem.solver.seed = rc.seed;
  return c;
}

struct Solved {
  RobustSolution solution;
  CcgState state;
};

Solved solve_one(const GridCase& grid, const UncertaintySpec& spec, const CcgConfig& config) {
  Solved out;
  switch (config.set_variant) {
    case SetVariant::Full: {
      const ApproximationResult r = run_approximation(grid, spec, config, grid.load_shed_prices);
      out.solution = approximation_solution(grid, r);
      out.state = r.relaxed_run ? r.relaxed_run->state : r.binary_run.state;
      break;
    }
    case SetVariant::BinaryLinked:
      if (!has_network(config.model_variant)) {
        out.solution = run_copperplate_exact(grid, spec, config, grid.load_shed_prices, &out.state);
        break;
      }
      [[fallthrough]];
    case SetVariant::RelaxedBinary: {
      CcgRun r = run_ccg(grid, spec, config, grid.load_shed_prices);
      out.solution = std::move(r.solution);
      out.state = std::move(r.state);
      break;
    }
    case SetVariant::RelaxedContinuous:
      throw DomainError("no solver for the relaxed continuous set; use full, binary or relaxed-binary");
  }
  return out;
}

int cmd_solve(const RunConfig& rc) {
  const GridCase grid = resolve_case(rc.case_name);
  const UncertaintySpec spec = UncertaintySpec::from_case(grid, rc.gamma_a, rc.gamma_d, rc.lag);
  const Solved s = solve_one(grid, spec, ccg_config(rc));
  fs::create_directories(rc.out);
  const fs::path dir = rc.out;
  write_text(dir / "solution.json", solution_json(grid, spec, s.solution));
  write_text(dir / "iterations.csv", iteration_log_csv(s.state, rc.timings));
  write_text(dir / "commitment.csv", commitment_csv(s.solution.commitment));
  write_text(dir / "capacity.csv", capacity_profile_csv(grid, s.solution.commitment));
  if (s.solution.worst_case) write_text(dir / "worst_case.json", scenario_to_json(*s.solution.worst_case) + "\n");
  std::cout << "status " << to_string(s.solution.status) << "  objective " << format_number(s.solution.objective)
            << "  LB " << format_number(s.solution.bounds.lb) << "  UB " << format_number(s.solution.bounds.ub)
            << "  gap " << format_number(s.solution.gap()) << "\n";
  for (const auto& n : s.solution.notes) std::cout << "note: " << n << "\n";
  return s.solution.status == SolutionStatus::Infeasible ? 2 : 0;
}

// Budget pairs of the sweep, in row order.
constexpr int kSweep[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                               {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};

int cmd_sweep(const RunConfig& rc) {
  const GridCase grid = resolve_case(rc.case_name);
  const CcgConfig config = ccg_config(rc);
  std::vector<SweepRow> rows(10);
  std::vector<std::string> errors(10);
  std::atomic<int> next{0};
  std::mutex io;
  auto worker = [&] {
    for (int k; (k = next++) < 10;) {
      try {
        const auto start = std::chrono::steady_clock::now();
        const UncertaintySpec spec = UncertaintySpec::from_case(grid, kSweep[k][0], kSweep[k][1], rc.lag);
        const Solved s = solve_one(grid, spec, config);
        SweepRow& r = rows[k];
        r.gamma_a = kSweep[k][0];
        r.gamma_d = kSweep[k][1];
        r.lb = s.solution.bounds.lb;
        r.ub = s.solution.bounds.ub;
        r.status = to_string(s.solution.status);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::lock_guard lock(io);
        std::cerr << "(" << r.gamma_a << "," << r.gamma_d << ") " << r.status << " gap " << format_number(r.gap())
                  << "\n";
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::max(1, rc.jobs); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (int k = 0; k < 10; ++k)
    if (!errors[k].empty()) throw Error("sweep row " + std::to_string(k + 1) + ": " + errors[k]);
  fs::create_directories(rc.out);
  write_text(fs::path(rc.out) / "sweep.csv", sweep_csv(rows, rc.timings));
  std::cout << sweep_csv(rows, rc.timings);
  return 0;
}

int cmd_verify(const RunConfig& rc) {
  VerifyOptions options;
  options.threads = std::max(1, rc.jobs);
  options.time_limit_seconds = rc.time_limit;
  const VerifyReport report = rc.case_name.empty() ? verify_stock(options)
                              : fs::exists(rc.case_name)
                                  ? verify_case_file(rc.case_name, options)
                                  : [&] {
                                      VerifyReport r;
                                      verify_case(rc.case_name, fixtures::by_name(rc.case_name), options, r);
                                      return r;
                                    }();
  std::cout << report.text();
  return report.passed() ? 0 : 1;
}

// Writes a case as JSON; with --solution, also the commitment and capacity
// tables of a solution file written by solve.
int cmd_export(const RunConfig& rc, const std::string& solution_path, bool list) {
  if (list) {
    for (const auto& c : fixtures::all_named_cases()) std::cout << c.name << "\n";
    return 0;
  }
  const GridCase grid = resolve_case(rc.case_name);
  fs::create_directories(rc.out);
  const fs::path dir = rc.out;
  if (solution_path.empty()) {
    const fs::path file = dir / (fs::path(rc.case_name).stem().string() + ".json");
    save_case(grid, file);
    std::cout << file.string() << "\n";
    return 0;
  }
  std::ifstream f(solution_path);
  if (!f) throw Error("cannot read " + solution_path);
  const auto j = nlohmann::json::parse(f);
  const auto& on = j.at("commitment").at("on");
  Matrix<int> schedule(grid.num_generators(), grid.num_periods());
  if (on.size() != schedule.rows()) throw ValidationError("solution does not match the case's units");
  for (std::size_t i = 0; i < schedule.rows(); ++i) {
    if (on[i].size() != schedule.cols()) throw ValidationError("solution does not match the case's horizon");
    for (std::size_t t = 0; t < schedule.cols(); ++t) schedule(i, t) = on[i][t].get<int>();
  }
  const CommitmentDecision c = commitment_from_schedule(grid, schedule);
  write_text(dir / "commitment.csv", commitment_csv(c));
  write_text(dir / "capacity.csv", capacity_profile_csv(grid, c));
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& rc, bool needs_case) {
  auto* opt = cmd->add_option("--case", rc.case_name, "case JSON file or built-in fixture name");
  if (needs_case) opt->required();
  cmd->add_option("--variant", rc.variant, "network, network-shed, copperplate or copperplate-shed")
      ->capture_default_str();
  cmd->add_option("--set", rc.set, "full, binary or relaxed-binary")->capture_default_str();
  cmd->add_option("--gamma-a", rc.gamma_a, "temperature budget")->check(CLI::NonNegativeNumber);
  cmd->add_option("--gamma-d", rc.gamma_d, "demand budget")->check(CLI::NonNegativeNumber);
  cmd->add_option("--lag", rc.lag, "periods demand may lag temperature")->capture_default_str();
  cmd->add_option("--epsilon", rc.epsilon, "relative gap tolerance")->capture_default_str();
  cmd->add_option("--time-limit", rc.time_limit, "seconds per run")->capture_default_str();
  cmd->add_option("--jobs", rc.jobs, "parallel jobs")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", rc.seed, "solver random seed");
  cmd->add_option("--out", rc.out, "output directory")->capture_default_str();
  cmd->add_flag("!--no-timings", rc.timings, "leave timing columns empty");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust unit commitment under temperature and demand uncertainty"};
  app.require_subcommand(1);
  RunConfig rc;
  std::string solution_path;
  bool list = false;

  auto* solve = app.add_subcommand("solve", "solve one budget setting and write artifacts");
  add_common(solve, rc, true);
  auto* sweep = app.add_subcommand("sweep", "ten budget pairs (0..3, 0..3) into sweep.csv");
  add_common(sweep, rc, true);
  auto* verify = app.add_subcommand("verify", "oracle and invariant checks; stock fixtures without --case");
  add_common(verify, rc, false);
  auto* exp = app.add_subcommand("export", "write a case as JSON, or a solution's tables as CSV");
  add_common(exp, rc, false);
  exp->add_option("--solution", solution_path, "solution.json from solve");
  exp->add_flag("--list", list, "list built-in fixtures");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return cmd_solve(rc);
    if (*sweep) return cmd_sweep(rc);
    if (*verify) return cmd_verify(rc);
    if (!list && rc.case_name.empty()) throw CLI::RequiredError("--case");
    return cmd_export(rc, solution_path, list);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
