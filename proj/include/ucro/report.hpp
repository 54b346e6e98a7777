#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ucro/ccg.hpp"
#include "ucro/grid.hpp"
#include "ucro/uc.hpp"
#include "ucro/uncertainty.hpp"

// CSV and JSON artifacts written by the command-line tool. Numbers use six
// significant digits; tables have one row per unit or bus and period
// columns 1..T.
namespace ucro {

std::string format_number(double x);

// iter,LB,UB,gap,kind,seconds. With timings off the seconds column is empty,
// which makes reruns byte-identical.
std::string iteration_log_csv(const CcgState& state, bool timings = true);
std::string commitment_csv(const CommitmentDecision& c);
std::string dispatch_csv(const RecourseDecision& r);
std::string capacity_profile_csv(const GridCase& grid, const CommitmentDecision& c);

struct SweepRow {
  int gamma_a = 0;
  int gamma_d = 0;
  double lb = 0.0;
  double ub = lp::kInf;
  double seconds = 0.0;
  std::string status;
  double gap() const { return relative_gap(lb, ub); }
};

// Gamma_A,Gamma_D,LB,UB,Gap,seconds,V_RB. V_RB repeats UB: it is the value
// of the returned commitment over the relaxed binary set.
std::string sweep_csv(const std::vector<SweepRow>& rows, bool timings = true);

std::string solution_json(const GridCase& grid, const UncertaintySpec& spec, const RobustSolution& s);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ucro
