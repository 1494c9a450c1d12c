#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "romi/hiermodel.hpp"
#include "romi/monitoring.hpp"
#include "romi/outcomes.hpp"
#include "romi/scenario.hpp"

namespace romi {

enum class DesignKind { pool, independent, romi_v1_nc, romi_v1, romi_v2 };

const char* to_string(DesignKind k);

struct DesignConfig {
  DesignKind kind = DesignKind::romi_v1;
  int n_indications = 3;
  int stage1_n = 14;          // per indication, high dose only (ROMI)
  int stage2_n_per_dose = 20; // ROMI stage-2 cap per dose
  int indep_n_per_dose = 27;  // Independent cap per dose
  long pool_total = 0;        // 0 derives K * (stage1_n + 2 * stage2_n_per_dose)
  // size 1 = shared across indications, otherwise size K
  std::vector<MonitoringLimits> limits{MonitoringLimits{}};
  std::vector<UtilityTable> utilities{UtilityTable{}};
  HierHyperparams hyper;
  McmcConfig mcmc;

  void validate() const;
  const MonitoringLimits& limits_for(int k) const {
    return limits.size() == 1 ? limits[0] : limits.at(k);
  }
  const UtilityTable& utility_for(int k) const {
    return utilities.size() == 1 ? utilities[0] : utilities.at(k);
  }
  long pool_total_effective() const {
    return pool_total > 0
               ? pool_total
               : static_cast<long>(n_indications) * (stage1_n + 2L * stage2_n_per_dose);
  }
  bool is_romi() const {
    return kind == DesignKind::romi_v1 || kind == DesignKind::romi_v2 ||
           kind == DesignKind::romi_v1_nc;
  }
};

enum class DoseStatus { enrolling, stopped_toxicity, stopped_futility, completed };
enum class IndicationStatus { active, dropped_stage1, terminated, finished };
enum class SelectReason { selected, dropped_stage1, terminated_interim, no_acceptable_dose };

struct DoseState {
  OutcomeCounts stage1;  // ROMI high dose only; empty otherwise
  OutcomeCounts stage2;
  DoseStatus status = DoseStatus::enrolling;

  long n() const { return stage1.total() + stage2.total(); }
  OutcomeCounts pooled() const { return stage1 + stage2; }
};

struct IndicationResult {
  Selection selection = Selection::none;
  SelectReason reason = SelectReason::no_acceptable_dose;
  IndicationStatus status = IndicationStatus::active;
  DoseState high, low;
  double q_high = 0.0, q_low = 0.0;  // posterior mean utilities at final fit

  long n() const { return high.n() + low.n(); }
};

struct TrialResult {
  std::vector<IndicationResult> indications;
  long total_n = 0;
};

// Patient outcome feed; the default implementation samples from the scenario,
// tests can play back scripted outcomes while keeping randomization fixed.
class OutcomeSource {
 public:
  virtual ~OutcomeSource() = default;
  virtual BinaryOutcome draw(int k, Dose dose, Stage stage) = 0;
};

// Derived per-(config, scenario) tables shared read-only by all replications:
// stopping boundaries and effective joint distributions.
class PreparedDesign {
 public:
  PreparedDesign(const DesignConfig& cfg, const ScenarioSpec& sc);

  const DesignConfig& cfg() const { return cfg_; }
  const ScenarioSpec& scenario() const { return sc_; }
  const StoppingBoundaries& bounds(int k) const {
    return bounds_.size() == 1 ? bounds_[0] : bounds_.at(k);
  }
  const JointOutcomeProb& joint(int k, Dose dose, Stage stage) const;
  long interim_per_dose() const { return interim_per_dose_; }
  long pool_cap_per_dose() const { return pool_cap_per_dose_; }

 private:
  DesignConfig cfg_;
  ScenarioSpec sc_;
  std::vector<StoppingBoundaries> bounds_;
  std::vector<JointOutcomeProb> joint_h1_, joint_h2_, joint_l2_;
  long interim_per_dose_ = 0;
  long pool_cap_per_dose_ = 0;
};

// Execute one replication. Deterministic in (prepared tables, seed): outcome
// draws, block randomization, and the model fit use streams derived from the
// seed with distinct keys, so ROMI variants share identical enrollment paths.
TrialResult run_trial(const PreparedDesign& prep, uint64_t seed);

// Convenience overload matching the one-shot call signature.
TrialResult run_trial(const DesignConfig& cfg, const ScenarioSpec& sc, uint64_t seed);

// Same trial flow with injected outcomes (testing hook); block randomization
// and fit seeds still derive from `seed`.
TrialResult run_trial_with_source(const PreparedDesign& prep, OutcomeSource& src,
                                  uint64_t seed);

}  // namespace romi
