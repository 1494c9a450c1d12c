#pragma once

#include <string>
#include <vector>

#include "romi/designs.hpp"
#include "romi/simengine.hpp"

namespace romi::validation {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Reference operating characteristics (published values) for one
// scenario x design cell of the three-indication study.
struct TableCell {
  double sel_high = 0, sel_low = 0;
};
struct TableRow {
  std::string scenario;
  std::string design;
  std::vector<TableCell> ind;
  double csp = 0;    // NaN = not defined for the scenario
  double n_avg = 0;
  bool gated = true; // rows kept out of the tolerance gate are informational
};

std::vector<TableRow> table_rows();
ScenarioSpec table_scenario(const std::string& name);  // A1..A6
ScenarioSpec drift_scenario(double delta);             // all-responsive truth + drift
DesignConfig table_design(const std::string& design);  // standard configuration

struct RowResult {
  const TableRow* expected = nullptr;
  OperatingCharacteristics got;
  double max_sel_err = 0, csp_err = 0, n_err = 0;
  bool pass = false;
};
RowResult run_table_row(const TableRow& row, long n_reps, uint64_t seed, int threads);

std::vector<CheckResult> quick_checks(const std::string& fixture_dir);
std::vector<CheckResult> full_checks(const std::string& fixture_dir, long table_reps,
                                     int threads);

// Formats "name: PASS/FAIL (detail)" lines; returns the failure count.
int print_results(const std::vector<CheckResult>& results);

}  // namespace romi::validation
