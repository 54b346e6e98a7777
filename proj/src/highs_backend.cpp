#include <chrono>
#include <fstream>

#include <Highs.h>

#include "ucro/error.hpp"
#include "ucro/lp.hpp"

namespace ucro::lp {

namespace {

HighsLp to_highs(const Model& model) {
  HighsLp lp;
  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  lp.num_col_ = static_cast<HighsInt>(vars.size());
  lp.num_row_ = static_cast<HighsInt>(rows.size());
  lp.sense_ = model.objective_sense() == ObjectiveSense::Minimize ? ObjSense::kMinimize
                                                                    : ObjSense::kMaximize;
  lp.offset_ = model.objective_offset();
  bool mip = false;
  for (const auto& v : vars) {
    lp.col_cost_.push_back(v.objective);
    lp.col_lower_.push_back(v.lower);
    lp.col_upper_.push_back(v.upper);
    const bool integer = v.kind == VarKind::Binary;
    mip = mip || integer;
    lp.integrality_.push_back(integer ? HighsVarType::kInteger : HighsVarType::kContinuous);
  }
  if (!mip) lp.integrality_.clear();
  for (const auto& r : rows) {
    lp.row_lower_.push_back(r.sense == Sense::LessEqual ? -kHighsInf : r.rhs);
    lp.row_upper_.push_back(r.sense == Sense::GreaterEqual ? kHighsInf : r.rhs);
  }
  // Column-wise copy of the row-wise constraint store.
  std::vector<HighsInt> count(vars.size() + 1, 0);
  for (const auto& r : rows)
    for (const auto& t : r.terms) ++count[t.var.index + 1];
  for (std::size_t j = 0; j < vars.size(); ++j) count[j + 1] += count[j];
  lp.a_matrix_.format_ = MatrixFormat::kColwise;
  lp.a_matrix_.num_col_ = lp.num_col_;
  lp.a_matrix_.num_row_ = lp.num_row_;
  lp.a_matrix_.start_ = count;
  lp.a_matrix_.index_.resize(count.back());
  lp.a_matrix_.value_.resize(count.back());
  std::vector<HighsInt> fill(count.begin(), count.end() - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& t : rows[i].terms) {
      const HighsInt k = fill[t.var.index]++;
      lp.a_matrix_.index_[k] = static_cast<HighsInt>(i);
      lp.a_matrix_.value_[k] = t.coef;
    }
  }
  return lp;
}

class HighsBackend final : public Backend {
 public:
  std::string name() const override { return "highs"; }

  SolveOutcome solve(const Model& model, const SolverConfig& config) override {
    if (!config.dump_path.empty()) {
      std::ofstream out(config.dump_path);
      out << model.to_lp_format();
    }
    const auto start = std::chrono::steady_clock::now();
    SolveOutcome outcome = run(model, config, true);
    if (outcome.status == SolveStatus::NumericalFailure && outcome.message == "unbounded or infeasible")
      outcome = run(model, config, false);
    if (outcome.message == "unbounded or infeasible") {
      // Still ambiguous: decide feasibility with a zero objective.
      Model probe = model;
      for (std::size_t j = 0; j < probe.num_variables(); ++j)
        probe.set_objective_coefficient(Var{static_cast<int>(j)}, 0.0);
      const SolveOutcome feas = run(probe, config, false);
      outcome.status = feas.status == SolveStatus::Optimal ? SolveStatus::Unbounded : SolveStatus::Infeasible;
      outcome.message.clear();
    }
    outcome.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
  }

 private:
  static SolveOutcome run(const Model& model, const SolverConfig& config, bool presolve) {
    Highs highs;
    highs.setOptionValue("output_flag", false);
    highs.setOptionValue("threads", config.threads);
    highs.setOptionValue("random_seed", static_cast<HighsInt>(config.seed % 2147483647u));
    highs.setOptionValue("time_limit", config.time_limit_seconds);
    highs.setOptionValue("mip_rel_gap", config.mip_gap);
    highs.setOptionValue("mip_abs_gap", 1e-9);
    highs.setOptionValue("mip_feasibility_tolerance", 1e-9);
    highs.setOptionValue("primal_feasibility_tolerance", 1e-9);
    highs.setOptionValue("dual_feasibility_tolerance", 1e-9);
    if (!presolve) highs.setOptionValue("presolve", "off");

    SolveOutcome out;
    if (highs.passModel(to_highs(model)) == HighsStatus::kError) {
      out.message = "HiGHS rejected the model";
      return out;
    }
    if (highs.run() == HighsStatus::kError) {
      out.message = "HiGHS run failed";
      return out;
    }
    const HighsModelStatus status = highs.getModelStatus();
    const HighsInfo& info = highs.getInfo();
    const bool mip = model.is_mip();
    const bool has_primal = info.primal_solution_status == kSolutionStatusFeasible;

    switch (status) {
      case HighsModelStatus::kOptimal: out.status = SolveStatus::Optimal; break;
      case HighsModelStatus::kInfeasible: out.status = SolveStatus::Infeasible; break;
      case HighsModelStatus::kUnbounded: out.status = SolveStatus::Unbounded; break;
      case HighsModelStatus::kTimeLimit: out.status = SolveStatus::TimeLimit; break;
      case HighsModelStatus::kUnboundedOrInfeasible:
        out.status = SolveStatus::NumericalFailure;
        out.message = "unbounded or infeasible";
        return out;
      case HighsModelStatus::kModelEmpty:
        out.status = SolveStatus::Optimal;
        break;
      default:
        out.status = SolveStatus::NumericalFailure;
        out.message = "HiGHS status: " + highs.modelStatusToString(status);
        return out;
    }
    if (out.status == SolveStatus::Optimal || (out.status == SolveStatus::TimeLimit && has_primal)) {
      const HighsSolution& sol = highs.getSolution();
      out.primal_values = sol.col_value;
      out.primal_values.resize(model.num_variables(), 0.0);
      out.objective_value = info.objective_function_value;
      if (status == HighsModelStatus::kModelEmpty) {
        out.objective_value = model.objective_offset();
        for (std::size_t j = 0; j < model.num_variables(); ++j) {
          const auto& v = model.variables()[j];
          out.primal_values[j] = std::max(v.lower, std::min(v.upper, 0.0));
          out.objective_value += v.objective * out.primal_values[j];
        }
      }
      out.objective_bound = mip ? info.mip_dual_bound : out.objective_value;
      if (!mip && sol.dual_valid) {
        out.dual_values = sol.row_dual;
        out.reduced_costs = sol.col_dual;
      }
    }
    return out;
  }
};

}  // namespace

std::unique_ptr<Backend> make_highs_backend() { return std::make_unique<HighsBackend>(); }

}  // namespace ucro::lp
