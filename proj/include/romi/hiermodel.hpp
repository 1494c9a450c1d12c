#pragma once

#include <cstdint>
#include <vector>

namespace romi {

enum class TauPrior { inverse_gamma, half_cauchy };

// Hyperparameters of the hierarchical utility models. Defaults are the
// standard simulation configuration.
struct HierHyperparams {
  // cluster-mean priors mu_g ~ N(center, sd^2); cluster 1 = "low dose better"
  double mu0_center = -0.05;
  double mu1_center = 0.05;
  double mu0_sd = 0.1;
  double mu1_sd = 0.1;
  // between-indication variance tau^2
  TauPrior tau_prior = TauPrior::inverse_gamma;
  double tau_ig_shape = 1e-4;
  double tau_ig_rate = 1e-4;
  double tau_hc_scale = 1.0;  // Half-Cauchy scale on tau (alternative prior)
  // Beta prior on each Q_H
  double qh_a = 0.1;
  double qh_b = 0.1;
  // Beta prior on the cluster probability q
  double q_a = 0.1;
  double q_b = 0.1;
  // spike-and-slab prior on the between-stage drift (model v2)
  double spike_var = 0.01;
  double slab_var = 0.25;
  // no-clustering variant: theta_k ~ N(mu, tau^2), mu ~ N(center, sd^2).
  // The grand mean needs a vague prior so it can track the pooled data;
  // a tight one caps the borrowing that defines this variant.
  double nc_mu_center = 0.0;
  double nc_mu_sd = 1.0;

  void validate() const;
};

struct McmcConfig {
  long n_iter = 6000;
  long n_burn = 2000;
  long thin = 1;
  double init_step = 0.5;      // initial random-walk sd, adapted during burn-in
  double target_accept = 0.35; // Robbins-Monro target
  uint64_t seed = 1;
  bool prior_only = false;     // testing hook: drop the likelihood
  bool keep_chains = false;    // retain kept draws of the global parameters

  void validate() const;
};

// Quasi-event data for one indication. z values are utility-standardized
// pseudo-counts and need not be integers; the stage-1 cells matter for model
// v2 only. Inactive indications are excluded from the fit.
struct IndicationQuasiData {
  double z_h = 0.0;  // stage-2 quasi-events, high dose
  double z_l = 0.0;  // stage-2 quasi-events, low dose
  long n_h = 0;
  long n_l = 0;
  double z_h1 = 0.0;  // stage-1 quasi-events, high dose
  long n_h1 = 0;
  bool active = true;
};

struct QuasiData {
  std::vector<IndicationQuasiData> indications;
};

struct ChainSummary {
  double mean = 0.0;
  double sd = 0.0;
  double mcse = 0.0;
  double ess = 0.0;
};

// Posterior summary for one indication; entries for inactive indications are
// NaN-filled. q_high/q_low refer to the stage-2 standardized utilities.
struct IndicationFit {
  ChainSummary q_high;
  ChainSummary q_low;
  double pr_cluster_low = 0.0;  // Pr(zeta_k = 1 | data)
  double beta_mean = 0.0;       // v2 drift posterior mean
  double pr_spike = 0.0;        // v2 Pr(drift in the spike component)
};

struct PosteriorSummary {
  std::vector<IndicationFit> indications;
  double mu0_mean = 0.0, mu1_mean = 0.0;  // cluster means (v1/v2)
  double mu_nc_mean = 0.0;                // common mean (NC variant)
  double tau2_mean = 0.0;
  double q_mean = 0.0;
  double omega_mean = 0.0;  // v2 spike weight
  // diagnostics
  double accept_logit_qh = 0.0;
  double accept_theta = 0.0;
  double accept_beta = 0.0;
  double accept_shift = 0.0;  // NC group-translation move
  double tau2_floor_rate = 0.0;  // fraction of tau^2 draws clipped at the floor
  long kept = 0;
  // kept chains of global parameters (only with keep_chains)
  std::vector<double> chain_tau2, chain_mu0, chain_mu1, chain_q, chain_omega,
      chain_mu_nc;
};

// Latent-cluster hierarchical model on theta_k = logit(Q_L,k) - logit(Q_H,k),
// stage-2 data only.
PosteriorSummary fit_v1(const QuasiData& data, const HierHyperparams& hp,
                        const McmcConfig& mc);

// Same structure without clustering: theta_k ~ N(mu, tau^2).
PosteriorSummary fit_nc(const QuasiData& data, const HierHyperparams& hp,
                        const McmcConfig& mc);

// Extended model: stage-1 high-dose data enter through a between-stage drift
// beta_k with spike-and-slab prior; OBD quantities remain stage-2.
PosteriorSummary fit_v2(const QuasiData& data, const HierHyperparams& hp,
                        const McmcConfig& mc);

// Conjugate quasi-binomial fit: Q ~ Beta(prior_a + z, prior_b + n - z).
struct ConjugateFit {
  double post_a = 0.0;
  double post_b = 0.0;
  double mean() const { return post_a / (post_a + post_b); }
};
ConjugateFit fit_conjugate(double z, long n, double prior_a = 0.1,
                           double prior_b = 0.1);

// Mean/sd plus Geyer initial-positive-sequence ESS and the implied MCSE.
ChainSummary summarize_chain(const std::vector<double>& x);

}  // namespace romi
