#pragma once

#include <string>
#include <vector>

#include "romi/designs.hpp"
#include "romi/scenario.hpp"

namespace romi {

// One simulation run: scenarios x designs at fixed reps/seed. All scenarios
// in a run share the indication count of the design configuration.
struct RunConfig {
  std::vector<ScenarioSpec> scenarios;
  std::vector<DesignKind> designs;
  long n_reps = 2000;
  uint64_t seed = 20240101;
  int threads = 0;  // 0 = library default
  std::string out_dir = "out";
  std::string format = "both";  // csv | markdown | both
  DesignConfig base;            // sizes, limits, utilities, hyper, mcmc
};

// JSON ingestion. Unknown keys are rejected with the offending key named.
RunConfig load_run_config(const std::string& path);
ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario_json(const std::string& text, const std::string& where);

DesignKind parse_design_kind(const std::string& s);
const char* design_kind_id(DesignKind k);  // config-file identifier (kebab-case)

// Canonical serialization of everything that determines the results; hashing
// it pins the run manifest.
std::string canonical_run_json(const RunConfig& rc);

// Observed-counts input for the decide command.
struct ObservedDose {
  OutcomeCounts stage1;
  OutcomeCounts stage2;
  bool stopped = false;  // stopped at an earlier look
};
struct ObservedIndication {
  std::string name;
  ObservedDose high, low;
  bool dropped_stage1 = false;
};
struct ObservedCounts {
  std::string stage;  // "stage1" | "interim" | "final"
  std::vector<ObservedIndication> indications;
};
ObservedCounts load_observed_counts(const std::string& path);

}  // namespace romi
