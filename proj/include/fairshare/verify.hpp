#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fairshare {

// One measured check inside a criterion: `measured` compared against
// `target` under `mode` with tolerance `tol`.
struct CheckLine {
  std::string what;
  double measured = 0.0;
  double target = 0.0;
  double tol = 0.0;
  std::string mode;  // abs | rel | le | ge | gt | ci
  bool pass = false;
};

struct CriterionResult {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<CheckLine> checks;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string output_dir;  // scratch space for end-to-end CSV output
};

using Overrides = std::map<std::string, double>;

// Names in execution order; "end-to-end" re-runs every built-in scenario and
// therefore expects all other criteria to have run first.
std::vector<std::string> criteria_names();

CriterionResult run_criterion(const std::string& name, const VerifyOptions& options,
                              const Overrides& overrides,
                              const std::vector<CriterionResult>& prior);

// Criteria file: one criterion name per line, optional key=value tolerance
// overrides after it, '#' comments. Returns (name, overrides) pairs.
std::vector<std::pair<std::string, Overrides>> parse_criteria_file(
    const std::string& text, const std::string& source);

std::string format_check(const CheckLine& check);

}  // namespace fairshare
