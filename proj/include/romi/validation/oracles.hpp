#pragma once

#include <cstdint>

#include "romi/hiermodel.hpp"
#include "romi/monitoring.hpp"

namespace romi::oracle {

// Regularized incomplete beta via adaptive Simpson with endpoint
// substitutions; shares no numerics with the production beta_tail.
double beta_cdf(double a, double b, double x);

// Stopping decisions recomputed from beta_cdf, for boundary cross-checks.
bool tox_stop(long n, long x_tox, const MonitoringLimits& lim);
bool fut_stop(long n, long x_resp, const MonitoringLimits& lim, double cutoff);

// Futility boundary found by scanning the quadrature-based rule.
long fut_boundary(int n, const MonitoringLimits& lim, double cutoff);
long tox_boundary(int n, const MonitoringLimits& lim);

// Exact single-look stop probability (lgamma pmf summed to the boundary).
double fn_prob_exact(int n, double pi_true, const MonitoringLimits& lim,
                     double cutoff);

// Monte Carlo false-negative probability of the single-look futility rule.
struct McEstimate {
  double estimate = 0.0;
  double se = 0.0;
};
McEstimate fn_prob_mc(int n, double pi_true, const MonitoringLimits& lim,
                      double cutoff, long draws, uint64_t seed);

// Deterministic posterior for the K = 1 hierarchical models on a tensor grid,
// with mu_g, zeta, omega, delta, and q marginalized analytically and tau^2
// integrated on a log-scale grid. Exact alternative to the MCMC fits.
struct GridOptions {
  int n_logit = 801;  // l and theta axes (and beta for v2)
  int n_tau = 1201;
  double logit_halfwidth = 7.0;   // l range around the empirical center
  double theta_halfwidth = 9.0;
  double beta_halfwidth = 7.0;
  double log_tau2_lo = -22.0;
  double log_tau2_hi = 34.0;
};

struct GridPosterior {
  double q_high = 0.0;      // E[sigmoid(l)]
  double q_low = 0.0;       // E[sigmoid(l + theta)]
  double pr_cluster_low = 0.0;
  double beta_mean = 0.0;   // v2 only
  double pr_spike = 0.0;    // v2 only
};

enum class GridModel { v1, nc, v2 };

GridPosterior grid_posterior(GridModel model, const IndicationQuasiData& data,
                             const HierHyperparams& hp, const GridOptions& opt = {});

}  // namespace romi::oracle
