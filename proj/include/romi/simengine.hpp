#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "romi/designs.hpp"

namespace romi {

struct IndicationOC {
  std::string name;
  double pct_high = 0, pct_low = 0, pct_none = 0;
  double se_high = 0, se_low = 0, se_none = 0;
  // no-selection breakdown (percentages of all replications)
  double pct_dropped_stage1 = 0;
  double pct_terminated_interim = 0;
  double pct_no_acceptable = 0;
  double avg_n = 0;
};

struct OperatingCharacteristics {
  std::string scenario;
  std::string design;
  long n_reps = 0;
  std::vector<IndicationOC> indications;
  double csp = 0, csp_se = 0;  // NaN when no indication defines a true OBD
  double avg_total_n = 0;
  uint64_t digest = 0;  // replication-order-sensitive; pins determinism
};

// Monte Carlo study of one (design, scenario) cell. Replications use streams
// derived from (master_seed, replication index), so the result is identical
// for any worker count. n_threads <= 0 uses the OpenMP default.
OperatingCharacteristics simulate(const DesignConfig& cfg, const ScenarioSpec& sc,
                                  long n_reps, uint64_t master_seed,
                                  int n_threads = 0);

// Reference implementation: plain ordered loop, no OpenMP. Must produce
// byte-identical results to simulate(); kept for testing and benchmarking.
OperatingCharacteristics simulate_serial(const DesignConfig& cfg,
                                         const ScenarioSpec& sc, long n_reps,
                                         uint64_t master_seed);

// Average, over indications with a defined true OBD, of the percentage of
// replications selecting it. Throws NoTruthDefined if no indication has one.
double csp_percent(const std::vector<IndicationOC>& per_indication,
                   const ScenarioSpec& sc);

// Seed for one replication, derived counter-style from the master seed.
uint64_t replication_seed(uint64_t master_seed, long rep);

}  // namespace romi
