#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ucro/grid.hpp"

// Property suite behind the verify command: oracle comparisons and run
// invariants on cases small enough to enumerate.
namespace ucro {

struct PropertyResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;  // observed values and tolerances
};

struct VerifyReport {
  std::vector<PropertyResult> results;

  bool passed() const;
  std::string text() const;  // one line per property
};

struct VerifyOptions {
  double epsilon = 1e-6;
  double time_limit_seconds = 600.0;
  int threads = 1;
};

// Checks that apply to one case. A case too large for a check gets a
// skipped entry for it.
void verify_case(const std::string& label, const GridCase& grid, const VerifyOptions& options,
                 VerifyReport& report);

// The built-in fixtures.
VerifyReport verify_stock(const VerifyOptions& options);

// Loads the case first; a load or validation error is a failed property
// naming the broken invariant.
VerifyReport verify_case_file(const std::filesystem::path& path, const VerifyOptions& options);

}  // namespace ucro
