#include "ucro/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ucro/error.hpp"

namespace ucro {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  if (x == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

namespace {

std::string period_header(const std::string& first, std::size_t T) {
  std::string out = first;
  for (std::size_t t = 1; t <= T; ++t) out += "," + std::to_string(t);
  return out + "\n";
}

template <class M>
std::string table(const std::string& label, const std::string& prefix, const M& m) {
  std::string out = period_header(label, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += prefix + std::to_string(r + 1);
    for (std::size_t t = 0; t < m.cols(); ++t) out += "," + format_number(double(m(r, t)));
    out += "\n";
  }
  return out;
}

}  // namespace

std::string iteration_log_csv(const CcgState& state, bool timings) {
  std::string out = "iter,LB,UB,gap,kind,seconds\n";
  for (const auto& r : state.iteration_log) {
    out += std::to_string(r.iteration) + "," + format_number(r.lower_bound) + "," +
           format_number(r.upper_bound) + "," + format_number(r.gap) + "," + to_string(r.kind) + "," +
           (timings ? format_number(r.seconds) : "") + "\n";
  }
  return out;
}

std::string commitment_csv(const CommitmentDecision& c) { return table("generator", "g", c.on_state); }

std::string dispatch_csv(const RecourseDecision& r) { return table("generator", "g", r.nominal_output); }

std::string capacity_profile_csv(const GridCase& grid, const CommitmentDecision& c) {
  const auto profile = nominal_capacity_profile(grid, c);
  std::string out = period_header("series", profile.size()) + "nominal_capacity";
  for (double v : profile) out += "," + format_number(v);
  return out + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool timings) {
  std::string out = "Gamma_A,Gamma_D,LB,UB,Gap,seconds,V_RB\n";
  for (const auto& r : rows) {
    out += std::to_string(r.gamma_a) + "," + std::to_string(r.gamma_d) + "," + format_number(r.lb) + "," +
           format_number(r.ub) + "," + format_number(r.gap()) + "," + (timings ? format_number(r.seconds) : "") +
           "," + format_number(r.ub) + "\n";
  }
  return out;
}

std::string solution_json(const GridCase& grid, const UncertaintySpec& spec, const RobustSolution& s) {
  using nlohmann::ordered_json;
  auto num = [](double x) -> ordered_json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  auto rows = [](const Matrix<int>& m) {
    ordered_json out = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (std::size_t t = 0; t < m.cols(); ++t) row.push_back(m(r, t));
      out.push_back(row);
    }
    return out;
  };
  ordered_json j;
  j["status"] = to_string(s.status);
  j["objective"] = num(s.objective);
  j["first_stage_cost"] = num(s.first_stage_cost);
  j["bounds"] = {{"lb", num(s.bounds.lb)},
                 {"lb_source", s.bounds.lb_source},
                 {"ub", num(s.bounds.ub)},
                 {"ub_source", s.bounds.ub_source},
                 {"gap", num(s.gap())}};
  j["budgets"] = {{"gamma_a", spec.budget_temperature}, {"gamma_d", spec.budget_demand}, {"lag", spec.lag}};
  j["commitment"] = {{"on", rows(s.commitment.on_state)},
                     {"startup", rows(s.commitment.startup)},
                     {"shutdown", rows(s.commitment.shutdown)}};
  j["nominal_capacity"] = nominal_capacity_profile(grid, s.commitment);
  j["worst_case"] = s.worst_case ? ordered_json::parse(scenario_to_json(*s.worst_case)) : ordered_json(nullptr);
  j["notes"] = s.notes;
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

}  // namespace ucro
