#pragma once

#include <string>
#include <vector>

#include "romi/outcomes.hpp"

namespace romi {

enum class Dose { high, low };
enum class Stage { one, two };
enum class Selection { none, high, low };

const char* to_string(Selection s);

// True outcome model for one indication: marginal rates per dose, the label
// used for CSP scoring, and an optional stage-2 efficacy drift of the high
// dose (stage-1 rates stay at resp_high; stage 2 uses resp_high + drift).
struct IndicationScenario {
  std::string name;
  double tox_high = 0.0;
  double resp_high = 0.0;
  double tox_low = 0.0;
  double resp_low = 0.0;
  Selection true_obd = Selection::none;
  double drift = 0.0;
};

struct ScenarioSpec {
  std::string name;
  double phi = 0.25;
  std::vector<IndicationScenario> indications;

  int k() const { return static_cast<int>(indications.size()); }
  // probability ranges plus joint feasibility (including drifted margins);
  // throws ConfigError / InfeasibleAssociation
  void validate() const;
};

// Joint outcome distribution actually generating data for (indication, dose,
// stage). Drift shifts only the stage-2 high-dose response margin; the
// association parameter phi is shared.
JointOutcomeProb effective_joint(const ScenarioSpec& sc, int k, Dose dose,
                                 Stage stage);

}  // namespace romi
