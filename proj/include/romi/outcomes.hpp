#pragma once

#include <cstdint>

#include "romi/rng.hpp"

namespace romi {

// Utility table for the four (toxicity, response) outcomes. u01 scores
// (no tox, response), u10 scores (tox, no response); the admissibility
// conventions u01 = 100 and u10 = 0 anchor the scale.
struct UtilityTable {
  double u01 = 100.0;  // no toxicity, response
  double u00 = 40.0;   // no toxicity, no response
  double u11 = 60.0;   // toxicity, response
  double u10 = 0.0;    // toxicity, no response

  // throws ConfigError on violated ordering/range/anchor invariants
  void validate() const;
  // true when u01 - u00 == u11 - u10 and u01 - u11 == u00 - u10, i.e. the
  // table decomposes additively into a response gain and a toxicity loss
  bool additive(double tol = 1e-9) const;
};

// Joint probabilities of the four outcome cells for one dose.
struct JointOutcomeProb {
  double p01 = 0, p00 = 0, p11 = 0, p10 = 0;

  double pi_tox() const { return p11 + p10; }
  double pi_resp() const { return p01 + p11; }
  // association parameter recovered from the cells
  double phi() const;
  // throws DomainError unless all cells are in [0,1] and sum to 1
  void validate(double tol = 1e-12) const;
};

// Solve for the joint distribution given margins and association phi:
//   p11 = pi_t*pi_r + phi*sqrt(pi_r(1-pi_r)pi_t(1-pi_t)),
// remaining cells by subtraction. Throws InfeasibleAssociation if any cell
// would be negative, DomainError for margins outside [0,1] or |phi|>1.
JointOutcomeProb solve_joint(double pi_tox, double pi_resp, double phi);

// Expected utility E[U] for one dose under the table (0..100 scale).
double mean_utility(const UtilityTable& u, const JointOutcomeProb& p);

// Standardized mean utility Q = E[U]/100, the quasi-probability.
double quasi_prob(const UtilityTable& u, const JointOutcomeProb& p);

struct BinaryOutcome {
  bool tox = false;
  bool resp = false;
};

// Observed cell counts for one dose arm.
struct OutcomeCounts {
  long x01 = 0, x00 = 0, x11 = 0, x10 = 0;

  long total() const { return x01 + x00 + x11 + x10; }
  long tox() const { return x11 + x10; }
  long resp() const { return x01 + x11; }
  void add(const BinaryOutcome& y);
  OutcomeCounts operator+(const OutcomeCounts& o) const;
};

// Quasi-events z = (1/100) * sum_cells u_cell * x_cell (need not be integer).
double quasi_events(const UtilityTable& u, const OutcomeCounts& x);

// Draw one patient outcome. Consumes exactly two uniforms: the first decides
// toxicity, the second decides response conditional on toxicity, so a
// pointwise reduction in toxicity leaves the response stream untouched.
BinaryOutcome sample_outcome(const JointOutcomeProb& p, RngStream& rng);

}  // namespace romi
