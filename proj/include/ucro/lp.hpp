#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace ucro::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class Sense { LessEqual, Equal, GreaterEqual };
enum class ObjectiveSense { Minimize, Maximize };

struct Var {
  int index = -1;
  bool valid() const { return index >= 0; }
  friend bool operator==(Var, Var) = default;
};

struct Constraint {
  int index = -1;
  bool valid() const { return index >= 0; }
  friend bool operator==(Constraint, Constraint) = default;
};

struct Term {
  Var var;
  double coef = 0.0;
};

// Sparse linear expression plus a constant. Duplicate variables are allowed
// here and merged when the expression enters a model.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(Var v) { add(v, 1.0); }  // NOLINT(google-explicit-constructor)
  LinearExpr(double c) : constant_(c) {}  // NOLINT(google-explicit-constructor)

  LinearExpr& add(Var v, double coef) {
    if (coef != 0.0) terms_.push_back({v, coef});
    return *this;
  }
  LinearExpr& add(double c) {
    constant_ += c;
    return *this;
  }
  LinearExpr& operator+=(const LinearExpr& o);
  LinearExpr& operator-=(const LinearExpr& o);
  LinearExpr& operator*=(double s);

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

LinearExpr operator+(LinearExpr a, const LinearExpr& b);
LinearExpr operator-(LinearExpr a, const LinearExpr& b);
LinearExpr operator*(double s, LinearExpr e);

struct VariableData {
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
  std::string name;
};

struct ConstraintData {
  std::vector<Term> terms;  // merged, one entry per variable
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;
};

// Backend-neutral model builder. Variable bounds must be finite unless the
// caller passes +-kInf explicitly.
class Model {
 public:
  Var add_variable(VarKind kind, double lower, double upper, double objective = 0.0,
                   std::string name = {});
  Var add_continuous(double lower, double upper, double objective = 0.0, std::string name = {}) {
    return add_variable(VarKind::Continuous, lower, upper, objective, std::move(name));
  }
  Var add_binary(double objective = 0.0, std::string name = {}) {
    return add_variable(VarKind::Binary, 0.0, 1.0, objective, std::move(name));
  }

  // expr (sense) rhs. The expression constant moves to the right-hand side.
  Constraint add_constraint(const LinearExpr& expr, Sense sense, double rhs, std::string name = {});

  void set_objective_sense(ObjectiveSense s) { objective_sense_ = s; }
  ObjectiveSense objective_sense() const { return objective_sense_; }
  void set_objective_offset(double c) { objective_offset_ = c; }
  double objective_offset() const { return objective_offset_; }
  void set_objective_coefficient(Var v, double c);
  // Adds expr to the objective (its constant goes to the offset).
  void add_to_objective(const LinearExpr& expr);
  void set_bounds(Var v, double lower, double upper);

  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  bool is_mip() const;

  const VariableData& variable(Var v) const { return vars_.at(v.index); }
  const ConstraintData& constraint(Constraint c) const { return rows_.at(c.index); }
  const std::vector<VariableData>& variables() const { return vars_; }
  const std::vector<ConstraintData>& constraints() const { return rows_; }

  // CPLEX LP text format, for debugging.
  std::string to_lp_format() const;

 private:
  std::vector<VariableData> vars_;
  std::vector<ConstraintData> rows_;
  ObjectiveSense objective_sense_ = ObjectiveSense::Minimize;
  double objective_offset_ = 0.0;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, NumericalFailure };
std::string to_string(SolveStatus s);

struct SolverConfig {
  double time_limit_seconds = 3600.0;
  double mip_gap = 1e-6;
  int threads = 1;
  std::uint32_t seed = 0;
  std::string dump_path;  // writes the model in LP format when nonempty
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective_value = 0.0;  // includes the offset
  double objective_bound = 0.0;  // dual bound for MIPs, objective for LPs
  std::vector<double> primal_values;  // empty when no solution is available
  // LP only. dual_values[c] is the rate of change of the optimal objective
  // per unit increase of the right-hand side of constraint c.
  std::vector<double> dual_values;
  std::vector<double> reduced_costs;
  double solve_seconds = 0.0;
  std::string message;

  bool has_solution() const { return !primal_values.empty(); }
  double value(Var v) const { return primal_values.at(v.index); }
  double value(const LinearExpr& e) const;
  double dual(Constraint c) const { return dual_values.at(c.index); }
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual SolveOutcome solve(const Model& model, const SolverConfig& config) = 0;
};

// Known names: "highs". Throws SolverError otherwise.
std::unique_ptr<Backend> make_backend(const std::string& name);
// Backend named by UCRO_SOLVER_BACKEND, or HiGHS when unset.
std::unique_ptr<Backend> default_backend();

// Convenience wrapper around default_backend()->solve().
SolveOutcome solve(const Model& model, const SolverConfig& config = {});

}  // namespace ucro::lp
