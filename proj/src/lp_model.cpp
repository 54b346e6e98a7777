#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "ucro/error.hpp"
#include "ucro/lp.hpp"

namespace ucro::lp {

LinearExpr& LinearExpr::operator+=(const LinearExpr& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  constant_ += o.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& o) {
  for (const auto& t : o.terms_) terms_.push_back({t.var, -t.coef});
  constant_ -= o.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double s) {
  for (auto& t : terms_) t.coef *= s;
  constant_ *= s;
  return *this;
}

LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
LinearExpr operator*(double s, LinearExpr e) { return e *= s; }

Var Model::add_variable(VarKind kind, double lower, double upper, double objective,
                        std::string name) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper)
    throw SolverError("add_variable: inverted bounds [" + std::to_string(lower) + ", " +
                      std::to_string(upper) + "]");
  if (kind == VarKind::Binary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
    if (lower > upper) throw SolverError("add_variable: binary bounds outside [0,1]");
  }
  vars_.push_back({kind, lower, upper, objective, std::move(name)});
  return Var{static_cast<int>(vars_.size() - 1)};
}

Constraint Model::add_constraint(const LinearExpr& expr, Sense sense, double rhs,
                                 std::string name) {
  std::unordered_map<int, std::size_t> slot;
  std::vector<Term> merged;
  for (const auto& t : expr.terms()) {
    if (t.var.index < 0 || static_cast<std::size_t>(t.var.index) >= vars_.size())
      throw SolverError("add_constraint: unknown variable " + std::to_string(t.var.index));
    auto [it, fresh] = slot.emplace(t.var.index, merged.size());
    if (fresh) merged.push_back(t);
    else merged[it->second].coef += t.coef;
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back({std::move(merged), sense, rhs - expr.constant(), std::move(name)});
  return Constraint{static_cast<int>(rows_.size() - 1)};
}

void Model::set_objective_coefficient(Var v, double c) { vars_.at(v.index).objective = c; }

void Model::add_to_objective(const LinearExpr& expr) {
  for (const auto& t : expr.terms()) vars_.at(t.var.index).objective += t.coef;
  objective_offset_ += expr.constant();
}

void Model::set_bounds(Var v, double lower, double upper) {
  if (lower > upper) throw SolverError("set_bounds: inverted bounds");
  auto& d = vars_.at(v.index);
  d.lower = lower;
  d.upper = upper;
}

bool Model::is_mip() const {
  return std::any_of(vars_.begin(), vars_.end(),
                     [](const VariableData& v) { return v.kind == VarKind::Binary; });
}

namespace {

std::string var_name(const Model& m, int j) {
  const auto& n = m.variables()[j].name;
  return n.empty() ? "x" + std::to_string(j) : n + "_" + std::to_string(j);
}

void write_terms(std::ostream& os, const Model& m, const std::vector<Term>& terms) {
  if (terms.empty()) {
    os << " 0 " << var_name(m, 0);
    return;
  }
  for (const auto& t : terms) os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' ' << var_name(m, t.var.index);
}

}  // namespace

std::string Model::to_lp_format() const {
  std::ostringstream os;
  os.precision(17);
  os << (objective_sense_ == ObjectiveSense::Minimize ? "Minimize\n" : "Maximize\n") << " obj:";
  std::vector<Term> obj;
  for (std::size_t j = 0; j < vars_.size(); ++j)
    if (vars_[j].objective != 0.0) obj.push_back({Var{static_cast<int>(j)}, vars_[j].objective});
  if (vars_.empty()) os << " 0";
  else write_terms(os, *this, obj);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    os << " c" << i << ':';
    if (!vars_.empty()) write_terms(os, *this, rows_[i].terms);
    os << (rows_[i].sense == Sense::LessEqual ? " <= " : rows_[i].sense == Sense::Equal ? " = " : " >= ")
       << rows_[i].rhs << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& v = vars_[j];
    const std::string n = var_name(*this, static_cast<int>(j));
    if (std::isinf(v.lower) && std::isinf(v.upper)) os << ' ' << n << " free\n";
    else {
      os << ' ' << (std::isinf(v.lower) ? std::string("-inf") : std::to_string(v.lower)) << " <= " << n
         << " <= " << (std::isinf(v.upper) ? std::string("+inf") : std::to_string(v.upper)) << '\n';
    }
  }
  bool any_bin = false;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (vars_[j].kind != VarKind::Binary) continue;
    if (!any_bin) os << "Binaries\n";
    any_bin = true;
    os << ' ' << var_name(*this, static_cast<int>(j)) << '\n';
  }
  os << "End\n";
  return os.str();
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

double SolveOutcome::value(const LinearExpr& e) const {
  double v = e.constant();
  for (const auto& t : e.terms()) v += t.coef * primal_values.at(t.var.index);
  return v;
}

std::unique_ptr<Backend> make_highs_backend();

std::unique_ptr<Backend> make_backend(const std::string& name) {
  if (name == "highs" || name == "HiGHS") return make_highs_backend();
  throw SolverError("unknown solver backend '" + name + "' (available: highs)");
}

std::unique_ptr<Backend> default_backend() {
  const char* env = std::getenv("UCRO_SOLVER_BACKEND");
  return make_backend(env && *env ? env : "highs");
}

SolveOutcome solve(const Model& model, const SolverConfig& config) {
  thread_local std::unique_ptr<Backend> backend;
  if (!backend) backend = default_backend();
  return backend->solve(model, config);
}

}  // namespace ucro::lp
