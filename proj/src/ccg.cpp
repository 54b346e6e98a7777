#include "ucro/ccg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "ucro/error.hpp"

namespace ucro {

namespace {

constexpr double kPositiveShed = 1e-6;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string to_string(SubproblemKind k) {
  switch (k) {
    case SubproblemKind::Feasibility: return "feasibility";
    case SubproblemKind::Optimality: return "optimality";
    case SubproblemKind::LoadShed: return "loadshed";
  }
  return "?";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::GapClosed: return "gap-closed";
    case Termination::RepeatedCommitment: return "repeated-commitment";
    case Termination::DuplicateScenario: return "duplicate-scenario";
    case Termination::TimeLimit: return "time-limit";
    case Termination::IterationLimit: return "iteration-limit";
    case Termination::MasterInfeasible: return "master-infeasible";
  }
  return "?";
}

std::string to_string(SolutionStatus s) {
  switch (s) {
    case SolutionStatus::Exact: return "exact";
    case SolutionStatus::Approximate: return "approximate";
    case SolutionStatus::TimedOut: return "timed-out";
    case SolutionStatus::Infeasible: return "infeasible";
  }
  return "?";
}

double relative_gap(double lb, double ub) {
  if (ub == lp::kInf || lb == -lp::kInf) return lp::kInf;
  const double diff = std::max(0.0, ub - lb);
  if (std::abs(ub) < 1e-12) return diff <= 1e-12 ? 0.0 : lp::kInf;
  return diff / std::abs(ub);
}

double CcgState::gap() const { return relative_gap(lower_bound, upper_bound); }
double RobustSolution::gap() const { return relative_gap(bounds.lb, bounds.ub); }
double ApproximationResult::gap() const { return relative_gap(lb, ub); }

CcgRun run_ccg(const GridCase& grid, const UncertaintySpec& spec, const CcgConfig& config,
               const LoadShedPrices& prices) {
  if (!(config.epsilon > 0.0)) throw DomainError("run_ccg: epsilon must be positive");
  if (!is_binary(config.set_variant)) throw DomainError("run_ccg: subproblems need a binary uncertainty set");
  const auto start = Clock::now();
  const ModelVariant model = config.model_variant;
  const bool shed = has_shed(model);
  const RecourseCosts costs = shed ? RecourseCosts::fuel_and_shed(prices.price_per_period) : RecourseCosts::fuel_only();

  CcgRun run;
  CcgState& st = run.state;
  if (config.seed_nominal_scenario) st.scenario_pool.push_back(nominal_scenario(spec));
  std::vector<CommitmentDecision> seen;
  std::optional<CommitmentDecision> last;

  for (int iter = 1;; ++iter) {
    const auto iter_start = Clock::now();
    if (iter > config.max_iterations) {
      st.verdict = Termination::IterationLimit;
      break;
    }
    const double remaining = config.time_limit_seconds - seconds_since(start);
    if (remaining <= 0.0) {
      st.verdict = Termination::TimeLimit;
      break;
    }
    lp::SolverConfig mc;
    mc.time_limit_seconds = remaining;
    mc.mip_gap = std::min(1e-4, config.epsilon / 10.0);
    mc.threads = config.threads;
    mc.seed = config.seed;
    const MasterResult m = solve_master(grid, st.scenario_pool, model, costs, mc);
    if (m.status == lp::SolveStatus::Infeasible) {
      st.verdict = Termination::MasterInfeasible;
      break;
    }
    if (m.status != lp::SolveStatus::Optimal) {
      st.verdict = Termination::TimeLimit;
      break;
    }
    IterationRecord rec;
    rec.iteration = iter;
    rec.master_bound = m.bound;
    st.lower_bound = std::max(st.lower_bound, m.bound);
    st.eta = m.eta;
    const CommitmentDecision& c = m.commitment;
    last = c;
    const bool repeated = std::find(seen.begin(), seen.end(), c) != seen.end();
    seen.push_back(c);
    const double fc = first_stage_cost(grid, c);

    SubproblemOptions so = config.subproblem;
    so.solver.time_limit_seconds =
        std::max(1.0, std::min(so.solver.time_limit_seconds, config.time_limit_seconds - seconds_since(start)));
    so.solver.threads = config.threads;
    so.solver.seed = config.seed;

    std::optional<WorstCaseResult> sp;
    if (shed) {
      sp = solve_sp_loadshed(grid, c, spec, config.set_variant, model, prices, config.magnify_shed_prices, so);
      rec.kind = SubproblemKind::LoadShed;
    } else {
      WorstCaseResult spf = solve_sp_feasibility(grid, c, spec, config.set_variant, model, so);
      if (spf.value > kPositiveShed) {
        rec.kind = SubproblemKind::Feasibility;
        rec.subproblem_value = spf.value;
        sp = std::move(spf);
      } else {
        sp = solve_sp_optimality(grid, c, spec, config.set_variant, model, so);
        rec.kind = SubproblemKind::Optimality;
      }
    }
    rec.subproblem_value = sp->value;
    Scenario cut = sp->scenario;
    // An infinite optimality value (no dispatch at all) acts as a feasibility cut.
    if (rec.kind != SubproblemKind::Feasibility && !sp->infinite() && !sp->timed_out) {
      const double candidate = fc + sp->value;
      if (candidate < st.upper_bound) {
        st.upper_bound = candidate;
        st.incumbent = c;
        st.incumbent_worst_case = sp->scenario;
        st.incumbent_shed_free = sp->shed_free;
      }
    }
    if (config.project_scenarios) cut = project_into_full(spec, cut);

    rec.lower_bound = st.lower_bound;
    rec.upper_bound = st.upper_bound;
    rec.gap = st.gap();
    const bool duplicate = std::any_of(st.scenario_pool.begin(), st.scenario_pool.end(),
                                       [&](const Scenario& s) { return s.same_fractions(cut, 1e-7); });
    bool stop = true;
    if (rec.gap <= config.epsilon) {
      st.verdict = Termination::GapClosed;
    } else if (duplicate) {
      st.verdict = Termination::DuplicateScenario;
    } else if (repeated) {
      st.verdict = Termination::RepeatedCommitment;
      st.repeated_before_convergence = true;
    } else {
      st.scenario_pool.push_back(cut);
      rec.scenario_id = static_cast<int>(st.scenario_pool.size()) - 1;
      stop = false;
    }
    rec.seconds = seconds_since(iter_start);
    st.iteration_log.push_back(rec);
    if (std::getenv("UCRO_TRACE"))
      std::fprintf(stderr, "iter %d  LB %g  UB %g  %s %g  %.1f s\n", rec.iteration, rec.lower_bound,
                   rec.upper_bound, to_string(rec.kind).c_str(), rec.subproblem_value, rec.seconds);
    if (stop) break;
  }

  RobustSolution& sol = run.solution;
  if (st.incumbent) {
    sol.commitment = *st.incumbent;
    sol.objective = st.upper_bound;
    sol.worst_case = st.incumbent_worst_case;
  } else if (last) {
    sol.commitment = *last;
  }
  if (st.incumbent || last) sol.first_stage_cost = first_stage_cost(grid, sol.commitment);
  const std::string set_name = to_string(config.set_variant);
  sol.bounds.lb = st.lower_bound;
  sol.bounds.lb_source = "master over scenarios in " + std::string(config.project_scenarios ? "full" : set_name);
  sol.bounds.ub = st.upper_bound;
  sol.bounds.ub_source = "worst case over " + set_name +
                         (shed && config.magnify_shed_prices ? " with magnified shed prices" : "");
  const double gap = st.gap();
  if (st.verdict == Termination::MasterInfeasible) {
    sol.status = SolutionStatus::Infeasible;
    sol.notes.push_back("no commitment is feasible for every pooled scenario");
  } else if (gap <= config.epsilon) {
    sol.status = SolutionStatus::Exact;
  } else if (st.verdict == Termination::TimeLimit || st.verdict == Termination::IterationLimit) {
    sol.status = SolutionStatus::TimedOut;
  } else {
    sol.status = SolutionStatus::Approximate;
    sol.notes.push_back("stopped on " + to_string(st.verdict) + " with gap above epsilon");
  }
  return run;
}

std::vector<std::string> check_trace(const CcgState& state, double epsilon, double rel_tol) {
  std::vector<std::string> bad;
  const auto& log = state.iteration_log;
  auto tol = [&](double v) { return rel_tol * std::max(1.0, std::abs(v)); };
  for (std::size_t k = 0; k < log.size(); ++k) {
    const auto& r = log[k];
    const std::string at = "iteration " + std::to_string(r.iteration) + ": ";
    if (r.upper_bound != lp::kInf && r.lower_bound > r.upper_bound + tol(r.upper_bound))
      bad.push_back(at + "LB above UB");
    if (k == 0) continue;
    const auto& p = log[k - 1];
    if (r.lower_bound < p.lower_bound) bad.push_back(at + "LB decreased");
    if (r.upper_bound > p.upper_bound) bad.push_back(at + "UB increased");
    if (r.master_bound < p.master_bound - tol(p.master_bound)) bad.push_back(at + "master bound decreased");
  }
  if (state.repeated_before_convergence)
    bad.push_back("commitment repeated with gap " + std::to_string(state.gap()) + " above " + std::to_string(epsilon));
  return bad;
}

ApproximationResult run_approximation(const GridCase& grid, const UncertaintySpec& spec,
                                      const CcgConfig& config, const LoadShedPrices& prices) {
  ApproximationResult res;
  const ModelVariant model = config.model_variant;
  auto finish = [&](bool timed_out) {
    if (res.binary_run.solution.status == SolutionStatus::Infeasible) {
      res.status = SolutionStatus::Infeasible;
    } else if (res.gap() <= config.epsilon) {
      res.status = SolutionStatus::Exact;
    } else {
      res.status = timed_out ? SolutionStatus::TimedOut : SolutionStatus::Approximate;
    }
    return res;
  };

  if (has_shed(model)) {
    CcgConfig c = config;
    c.set_variant = has_network(model) ? SetVariant::RelaxedBinary : SetVariant::BinaryLinked;
    c.magnify_shed_prices = true;
    c.project_scenarios = true;
    res.binary_run = run_ccg(grid, spec, c, prices);
    res.lb = res.binary_run.state.lower_bound;
    res.ub = res.binary_run.state.upper_bound;
    res.ub_source = res.binary_run.solution.bounds.ub_source;
    if (!has_network(model) && !check_binary_reduction_conditions(grid, spec).holds) {
      res.binary_run.solution.notes.push_back("binary reduction conditions fail; upper bound not certified");
      res.ub_source += " (uncertified)";
    }
    finish(res.binary_run.solution.status == SolutionStatus::TimedOut);
    if (res.ub_source.ends_with("(uncertified)") && res.status == SolutionStatus::Exact)
      res.status = SolutionStatus::Approximate;
    return res;
  }

  CcgConfig cb = config;
  cb.set_variant = SetVariant::BinaryLinked;
  res.binary_run = run_ccg(grid, spec, cb, prices);
  res.lb = res.binary_run.state.lower_bound;
  if (res.binary_run.solution.status == SolutionStatus::Infeasible) return finish(false);
  bool timed_out = res.binary_run.solution.status == SolutionStatus::TimedOut;

  if (res.binary_run.state.incumbent) {
    const CommitmentDecision& c = *res.binary_run.state.incumbent;
    res.relaxed_feasibility = solve_sp_feasibility(grid, c, spec, SetVariant::RelaxedBinary, model, config.subproblem);
    if (res.relaxed_feasibility->value <= kPositiveShed) {
      res.relaxed_worst_case = solve_sp_optimality(grid, c, spec, SetVariant::RelaxedBinary, model, config.subproblem);
      if (!res.relaxed_worst_case->infinite() && !res.relaxed_worst_case->timed_out) {
        res.ub = first_stage_cost(grid, c) + res.relaxed_worst_case->value;
        res.ub_source = "binary-set commitment priced over relaxed-binary";
        return finish(timed_out);
      }
    }
  }
  CcgConfig cr = config;
  cr.set_variant = SetVariant::RelaxedBinary;
  res.relaxed_run = run_ccg(grid, spec, cr, prices);
  res.ub = res.relaxed_run->state.upper_bound;
  res.ub_source = "C&CG over relaxed-binary";
  timed_out = timed_out || res.relaxed_run->solution.status == SolutionStatus::TimedOut;
  return finish(timed_out);
}

RobustSolution approximation_solution(const GridCase& grid, const ApproximationResult& result) {
  RobustSolution sol = result.relaxed_run ? result.relaxed_run->solution : result.binary_run.solution;
  if (result.relaxed_worst_case) sol.worst_case = result.relaxed_worst_case->scenario;
  sol.objective = result.ub;
  sol.first_stage_cost = first_stage_cost(grid, sol.commitment);
  sol.bounds.lb = result.lb;
  sol.bounds.lb_source = result.binary_run.solution.bounds.lb_source;
  sol.bounds.ub = result.ub;
  sol.bounds.ub_source = result.ub_source;
  sol.status = result.status;
  return sol;
}

RobustSolution run_copperplate_exact(const GridCase& grid, const UncertaintySpec& spec,
                                     const CcgConfig& config, const LoadShedPrices& prices,
                                     CcgState* state_out) {
  if (has_network(config.model_variant))
    throw DomainError("run_copperplate_exact: needs a copperplate model variant");
  CcgConfig c = config;
  c.set_variant = SetVariant::BinaryLinked;
  c.magnify_shed_prices = false;
  c.project_scenarios = false;
  CcgRun run = run_ccg(grid, spec, c, prices);
  RobustSolution sol = run.solution;
  const BinaryReductionReport rep = check_binary_reduction_conditions(grid, spec);
  if (sol.status == SolutionStatus::Exact) {
    if (!rep.holds) {
      sol.status = SolutionStatus::Approximate;
      for (const auto& v : rep.violations) sol.notes.push_back("binary reduction condition " + v);
    } else if (has_shed(config.model_variant) && !run.state.incumbent_shed_free) {
      sol.status = SolutionStatus::Approximate;
      sol.notes.push_back("worst case sheds load; binary set only gives a lower estimate");
    }
  }
  if (sol.status == SolutionStatus::Exact) {
    sol.bounds.lb_source = "master over scenarios in full";
    sol.bounds.ub_source = "worst case over binary (equal to full under the reduction conditions)";
  }
  if (state_out) *state_out = std::move(run.state);
  return sol;
}

}  // namespace ucro
