#include "romi/monitoring.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <sstream>

#include "romi/errors.hpp"

namespace romi {

double beta_tail(double alpha, double beta, double t, TailSide side) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw DomainError("beta_tail: shape parameters must be positive");
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError("beta_tail: threshold must lie in [0,1]");
  // Pr(p < t) = I_t(alpha, beta); the point mass at t is zero
  double below = boost::math::ibeta(alpha, beta, t);
  return side == TailSide::below ? below : 1.0 - below;
}

void MonitoringLimits::validate() const {
  auto in01 = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in01(tox_limit) || !in01(resp_floor))
    throw ConfigError("monitoring limits must lie strictly in (0,1)");
  if (!in01(c_tox) || !in01(c_fut) || !in01(c_fut_final))
    throw ConfigError("monitoring cutoffs must lie strictly in (0,1)");
  if (!(prior_a > 0.0) || !(prior_b > 0.0))
    throw ConfigError("monitoring prior parameters must be positive");
}

bool toxicity_stop(long n, long x_tox, const MonitoringLimits& lim) {
  // strict inequality: ties with the cutoff do not stop
  return beta_tail(lim.prior_a + x_tox, lim.prior_b + (n - x_tox), lim.tox_limit,
                   TailSide::above) > lim.c_tox;
}

bool futility_stop(long n, long x_resp, const MonitoringLimits& lim, double cutoff) {
  return beta_tail(lim.prior_a + x_resp, lim.prior_b + (n - x_resp),
                   lim.resp_floor, TailSide::below) > cutoff;
}

StoppingBoundaries::StoppingBoundaries(const MonitoringLimits& lim, int n_max) {
  lim.validate();
  if (n_max < 0) throw DomainError("boundary table needs n_max >= 0");
  tox_min_.resize(n_max + 1);
  fut_max_.resize(n_max + 1);
  fut_final_max_.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    // posterior tail is monotone in x, so the rule is a threshold rule;
    // scan once per n (n_max is small, no need for bisection)
    long tx = n + 1;
    for (long x = 0; x <= n; ++x)
      if (toxicity_stop(n, x, lim)) {
        tx = x;
        break;
      }
    tox_min_[n] = tx;
    auto fut_bound = [&](double cutoff) {
      long fx = -1;
      for (long x = n; x >= 0; --x)
        if (futility_stop(n, x, lim, cutoff)) {
          fx = x;
          break;
        }
      return fx;
    };
    fut_max_[n] = fut_bound(lim.c_fut);
    fut_final_max_[n] = fut_bound(lim.c_fut_final);
  }
  for (int n = 1; n <= n_max; ++n) {
    if (tox_min_[n] < tox_min_[n - 1] || fut_max_[n] < fut_max_[n - 1] ||
        fut_final_max_[n] < fut_final_max_[n - 1]) {
      std::ostringstream oss;
      oss << "stopping boundary not monotone at n=" << n;
      throw DomainError(oss.str());
    }
  }
}

double false_negative_prob(int n, double pi_true, const MonitoringLimits& lim,
                           double cutoff) {
  if (n < 1) throw DomainError("false_negative_prob: n must be >= 1");
  if (!(pi_true > 0.0 && pi_true < 1.0))
    throw DomainError("false_negative_prob: pi_true must lie in (0,1)");
  long bound = -1;
  for (long x = n; x >= 0; --x)
    if (futility_stop(n, x, lim, cutoff)) {
      bound = x;
      break;
    }
  if (bound < 0) return 0.0;
  boost::math::binomial_distribution<double> bin(n, pi_true);
  return boost::math::cdf(bin, static_cast<double>(bound));
}

CalibrationResult calibrate_stage1_n(const MonitoringLimits& lim, double delta,
                                     double max_fn, int n_lo, int n_hi) {
  lim.validate();
  if (n_lo < 1 || n_hi < n_lo) throw DomainError("calibration range invalid");
  double pi_target = lim.resp_floor + delta;
  if (!(pi_target > 0.0 && pi_target < 1.0))
    throw DomainError("calibration target rate outside (0,1)");
  for (int n = n_lo; n <= n_hi; ++n) {
    double fn = false_negative_prob(n, pi_target, lim, lim.c_fut);
    if (fn <= max_fn) {
      long bound = -1;
      for (long x = n; x >= 0; --x)
        if (futility_stop(n, x, lim, lim.c_fut)) {
          bound = x;
          break;
        }
      return {n, bound, fn};
    }
  }
  std::ostringstream oss;
  oss << "no n in [" << n_lo << "," << n_hi << "] achieves false-negative rate <= "
      << max_fn << " at response rate " << pi_target;
  throw NoFeasibleN(oss.str());
}

}  // namespace romi
