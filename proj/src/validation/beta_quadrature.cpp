#include <cmath>
#include <stdexcept>
#include <vector>

#include "romi/validation/oracles.hpp"
#include "romi/rng.hpp"

namespace romi::oracle {
namespace {

// Adaptive Simpson on a bounded integrand (absolute tolerance).
template <class F>
double simpson_step(const F& f, double a, double fa, double b, double fb,
                    double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = left + right - whole;
  if (depth <= 0 || std::fabs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 45);
}

// Normalized lower integral of the Beta(a, b) density over [0, t], t at or
// below the mean so the (1-x) factor stays well behaved. For a >= 1 the
// density is bounded there and integrates directly; for a < 1 the endpoint
// singularity at 0 is removed by u = x^a, giving the bounded integrand
//   (1/a) (1 - u^{1/a})^{b-1}  on  [0, t^a].
double lower_cdf(double a, double b, double t) {
  if (t <= 0.0) return 0.0;
  double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  constexpr double tol = 1e-13;
  if (a >= 1.0) {
    auto f = [a, b, log_norm](double x) {
      if (x <= 0.0) return a == 1.0 ? std::exp(log_norm) : 0.0;
      if (x >= 1.0) return 0.0;
      return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) + log_norm);
    };
    return adaptive_simpson(f, 0.0, t, tol);
  }
  double scale = std::exp(log_norm) / a;
  auto g = [a, b, scale](double u) {
    if (u <= 0.0) return scale;
    double x = std::pow(u, 1.0 / a);
    if (x >= 1.0) return 0.0;
    return scale * std::exp((b - 1.0) * std::log1p(-x));
  };
  return adaptive_simpson(g, 0.0, std::pow(t, a), tol);
}

}  // namespace

double beta_cdf(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || std::isnan(x)) {
    throw std::invalid_argument("beta_cdf: bad arguments");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double split = a / (a + b);  // integrate whichever side avoids the far endpoint
  if (x <= split) return lower_cdf(a, b, x);
  return 1.0 - lower_cdf(b, a, 1.0 - x);
}

bool tox_stop(long n, long x_tox, const MonitoringLimits& lim) {
  if (n == 0) return false;
  double a = lim.prior_a + static_cast<double>(x_tox);
  double b = lim.prior_b + static_cast<double>(n - x_tox);
  double pr_exceeds = 1.0 - beta_cdf(a, b, lim.tox_limit);
  return pr_exceeds > lim.c_tox;
}

bool fut_stop(long n, long x_resp, const MonitoringLimits& lim, double cutoff) {
  if (n == 0) return false;
  double a = lim.prior_a + static_cast<double>(x_resp);
  double b = lim.prior_b + static_cast<double>(n - x_resp);
  double pr_below = beta_cdf(a, b, lim.resp_floor);
  return pr_below > cutoff;
}

long fut_boundary(int n, const MonitoringLimits& lim, double cutoff) {
  long bound = -1;
  for (long x = 0; x <= n; ++x) {
    if (fut_stop(n, x, lim, cutoff)) bound = x;
    else break;  // rule is monotone in x
  }
  return bound;
}

long tox_boundary(int n, const MonitoringLimits& lim) {
  for (long x = 0; x <= n; ++x) {
    if (tox_stop(n, x, lim)) return x;
  }
  return n + 1;
}

double fn_prob_exact(int n, double pi_true, const MonitoringLimits& lim,
                     double cutoff) {
  long bound = fut_boundary(n, lim, cutoff);
  double total = 0.0;
  for (long x = 0; x <= bound; ++x) {
    double lp = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                std::lgamma(n - x + 1.0) + x * std::log(pi_true) +
                (n - x) * std::log1p(-pi_true);
    total += std::exp(lp);
  }
  return total;
}

McEstimate fn_prob_mc(int n, double pi_true, const MonitoringLimits& lim,
                      double cutoff, long draws, uint64_t seed) {
  std::vector<char> stops(static_cast<size_t>(n) + 1);
  for (long x = 0; x <= n; ++x) {
    stops[static_cast<size_t>(x)] = fut_stop(n, x, lim, cutoff) ? 1 : 0;
  }
  RngStream rng = RngStream::derive(seed, 0x666e70726f62ULL, static_cast<uint64_t>(n));
  long hits = 0;
  for (long d = 0; d < draws; ++d) {
    long x = 0;
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < pi_true) ++x;
    }
    hits += stops[static_cast<size_t>(x)];
  }
  double p = static_cast<double>(hits) / static_cast<double>(draws);
  double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(draws));
  return {p, se};
}

}  // namespace romi::oracle
