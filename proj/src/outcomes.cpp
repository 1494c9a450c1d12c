#include "romi/outcomes.hpp"

#include <cmath>
#include <sstream>

#include "romi/errors.hpp"

namespace romi {

void UtilityTable::validate() const {
  std::ostringstream oss;
  auto fail = [&](const char* msg) {
    oss << "utility table invalid: " << msg << " (u01=" << u01 << " u00=" << u00
        << " u11=" << u11 << " u10=" << u10 << ")";
    throw ConfigError(oss.str());
  };
  if (u01 != 100.0) fail("u01 must equal 100");
  if (u10 != 0.0) fail("u10 must equal 0");
  if (u00 < 0.0 || u00 > 100.0 || u11 < 0.0 || u11 > 100.0)
    fail("entries must lie in [0,100]");
  if (u01 < u11) fail("response with toxicity cannot beat response without");
  if (u00 < u10) fail("toxicity cannot improve a non-response");
  if (u01 < u00) fail("response must not lower utility absent toxicity");
  if (u11 < u10) fail("response must not lower utility under toxicity");
}

bool UtilityTable::additive(double tol) const {
  return std::abs((u01 - u00) - (u11 - u10)) <= tol &&
         std::abs((u01 - u11) - (u00 - u10)) <= tol;
}

double JointOutcomeProb::phi() const {
  double pt = pi_tox(), pr = pi_resp();
  double c = std::sqrt(pr * (1.0 - pr) * pt * (1.0 - pt));
  if (c == 0.0) return 0.0;  // degenerate margin: association undefined, report 0
  return (p11 - pt * pr) / c;
}

void JointOutcomeProb::validate(double tol) const {
  const double cells[4] = {p01, p00, p11, p10};
  for (double c : cells)
    if (!(c >= -tol && c <= 1.0 + tol))
      throw DomainError("joint outcome cell outside [0,1]");
  double s = p01 + p00 + p11 + p10;
  if (std::abs(s - 1.0) > 4 * tol)
    throw DomainError("joint outcome cells do not sum to 1");
}

JointOutcomeProb solve_joint(double pi_tox, double pi_resp, double phi) {
  if (!(pi_tox >= 0.0 && pi_tox <= 1.0) || !(pi_resp >= 0.0 && pi_resp <= 1.0))
    throw DomainError("marginal probabilities must lie in [0,1]");
  if (!(phi >= -1.0 && phi <= 1.0))
    throw DomainError("association phi must lie in [-1,1]");

  double c = std::sqrt(pi_resp * (1.0 - pi_resp) * pi_tox * (1.0 - pi_tox));
  JointOutcomeProb p;
  p.p11 = pi_tox * pi_resp + phi * c;
  p.p01 = pi_resp - p.p11;
  p.p10 = pi_tox - p.p11;
  p.p00 = 1.0 - pi_resp - pi_tox + p.p11;

  const double tol = 1e-12;
  if (p.p11 < -tol || p.p01 < -tol || p.p10 < -tol || p.p00 < -tol) {
    std::ostringstream oss;
    oss << "no joint distribution with pi_tox=" << pi_tox << " pi_resp=" << pi_resp
        << " phi=" << phi;
    throw InfeasibleAssociation(oss.str());
  }
  // clamp sub-tolerance negatives introduced by rounding
  if (p.p11 < 0) p.p11 = 0;
  if (p.p01 < 0) p.p01 = 0;
  if (p.p10 < 0) p.p10 = 0;
  if (p.p00 < 0) p.p00 = 0;
  return p;
}

double mean_utility(const UtilityTable& u, const JointOutcomeProb& p) {
  return u.u01 * p.p01 + u.u00 * p.p00 + u.u11 * p.p11 + u.u10 * p.p10;
}

double quasi_prob(const UtilityTable& u, const JointOutcomeProb& p) {
  return mean_utility(u, p) / 100.0;
}

void OutcomeCounts::add(const BinaryOutcome& y) {
  if (y.tox)
    ++(y.resp ? x11 : x10);
  else
    ++(y.resp ? x01 : x00);
}

OutcomeCounts OutcomeCounts::operator+(const OutcomeCounts& o) const {
  return {x01 + o.x01, x00 + o.x00, x11 + o.x11, x10 + o.x10};
}

double quasi_events(const UtilityTable& u, const OutcomeCounts& x) {
  return (u.u01 * x.x01 + u.u00 * x.x00 + u.u11 * x.x11 + u.u10 * x.x10) / 100.0;
}

BinaryOutcome sample_outcome(const JointOutcomeProb& p, RngStream& rng) {
  BinaryOutcome y;
  double pt = p.pi_tox();
  y.tox = rng.uniform() < pt;
  double p_resp_given = y.tox ? (pt > 0 ? p.p11 / pt : 0.0)
                              : (pt < 1 ? p.p01 / (1.0 - pt) : 0.0);
  y.resp = rng.uniform() < p_resp_given;
  return y;
}

}  // namespace romi
