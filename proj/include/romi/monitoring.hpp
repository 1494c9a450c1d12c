#pragma once

#include <vector>

namespace romi {

enum class TailSide { above, below };

// Pr(p > t) (above) or Pr(p < t) (below) for p ~ Beta(alpha, beta).
// Throws DomainError for non-positive shapes or t outside [0,1].
double beta_tail(double alpha, double beta, double t, TailSide side);

// Safety/futility rule constants for one indication.
struct MonitoringLimits {
  double tox_limit = 0.40;   // upper toxicity limit
  double resp_floor = 0.25;  // minimum acceptable response rate
  double c_tox = 0.95;       // cutoff for the toxicity rule (all looks)
  double c_fut = 0.95;       // cutoff for futility at stage-1 / interim looks
  double c_fut_final = 0.95; // cutoff for futility at the final analysis
  double prior_a = 0.1;      // Beta prior on the monitored rates
  double prior_b = 0.1;

  void validate() const;
};

// Eq.-style posterior rules on Beta(prior_a + x, prior_b + n - x).
// Stop iff the posterior tail probability strictly exceeds the cutoff.
bool toxicity_stop(long n, long x_tox, const MonitoringLimits& lim);
bool futility_stop(long n, long x_resp, const MonitoringLimits& lim, double cutoff);

// Precomputed integer stopping boundaries for n = 0..n_max:
//   tox_stop(n, x)  <=>  x >= tox_boundary(n)      (n+1 if never)
//   fut_stop(n, x)  <=>  x <= fut_boundary(n)      (-1 if never)
// Boundaries are verified monotone nondecreasing in n at construction.
class StoppingBoundaries {
 public:
  StoppingBoundaries(const MonitoringLimits& lim, int n_max);

  bool tox_stop(long n, long x_tox) const { return x_tox >= tox_min_[n]; }
  bool fut_stop(long n, long x_resp) const { return x_resp <= fut_max_[n]; }
  bool fut_stop_final(long n, long x_resp) const { return x_resp <= fut_final_max_[n]; }
  // a dose/indication is dropped when either rule fires
  bool stop(long n, long x_tox, long x_resp) const {
    return tox_stop(n, x_tox) || fut_stop(n, x_resp);
  }

  long tox_boundary(int n) const { return tox_min_[n]; }
  long fut_boundary(int n) const { return fut_max_[n]; }
  long fut_boundary_final(int n) const { return fut_final_max_[n]; }
  int n_max() const { return static_cast<int>(tox_min_.size()) - 1; }

 private:
  std::vector<long> tox_min_;
  std::vector<long> fut_max_;
  std::vector<long> fut_final_max_;
};

// Exact false-negative probability: chance the futility rule at cutoff stops
// a single look of size n when the true response rate is pi_true.
double false_negative_prob(int n, double pi_true, const MonitoringLimits& lim,
                           double cutoff);

struct CalibrationResult {
  int n = 0;                 // smallest feasible sample size
  long boundary = -1;        // futility boundary at that n
  double achieved_fn = 0.0;  // exact false-negative probability at n
};

// Smallest n in [n_lo, n_hi] whose single-look futility rule has
// false-negative probability <= max_fn at pi_true = resp_floor + delta.
// Throws NoFeasibleN when no n in range qualifies.
CalibrationResult calibrate_stage1_n(const MonitoringLimits& lim, double delta,
                                     double max_fn, int n_lo, int n_hi);

}  // namespace romi
