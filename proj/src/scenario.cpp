#include "romi/scenario.hpp"

#include <sstream>

#include "romi/errors.hpp"

namespace romi {

const char* to_string(Selection s) {
  switch (s) {
    case Selection::high: return "high";
    case Selection::low: return "low";
    default: return "none";
  }
}

void ScenarioSpec::validate() const {
  if (indications.empty()) throw ConfigError("scenario has no indications");
  if (!(phi >= -1.0 && phi <= 1.0))
    throw ConfigError("scenario phi must lie in [-1,1]");
  for (int k = 0; k < static_cast<int>(indications.size()); ++k) {
    const auto& ind = indications[k];
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(ind.tox_high) || !in01(ind.resp_high) || !in01(ind.tox_low) ||
        !in01(ind.resp_low)) {
      std::ostringstream oss;
      oss << "scenario rates outside [0,1] for indication " << k;
      throw ConfigError(oss.str());
    }
    if (!in01(ind.resp_high + ind.drift)) {
      std::ostringstream oss;
      oss << "drift pushes stage-2 response rate outside [0,1] for indication " << k;
      throw ConfigError(oss.str());
    }
    // feasibility of every joint actually used; solve_joint throws if not
    effective_joint(*this, k, Dose::high, Stage::one);
    effective_joint(*this, k, Dose::high, Stage::two);
    effective_joint(*this, k, Dose::low, Stage::two);
  }
}

JointOutcomeProb effective_joint(const ScenarioSpec& sc, int k, Dose dose,
                                 Stage stage) {
  const auto& ind = sc.indications.at(k);
  if (dose == Dose::low) return solve_joint(ind.tox_low, ind.resp_low, sc.phi);
  double resp = stage == Stage::two ? ind.resp_high + ind.drift : ind.resp_high;
  return solve_joint(ind.tox_high, resp, sc.phi);
}

}  // namespace romi
