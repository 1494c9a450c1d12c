#include <cmath>
#include <stdexcept>
#include <vector>

#include "romi/errors.hpp"
#include "romi/mathutil.hpp"
#include "romi/validation/oracles.hpp"

namespace romi::oracle {
namespace {

struct Axis {
  std::vector<double> x, w;  // nodes and composite Simpson weights
};

Axis make_axis(double lo, double hi, int n) {
  if (n < 5 || n % 2 == 0) throw std::invalid_argument("grid axis needs odd n >= 5");
  Axis ax;
  ax.x.resize(static_cast<size_t>(n));
  ax.w.resize(static_cast<size_t>(n));
  double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    ax.x[static_cast<size_t>(i)] = lo + h * i;
    double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    ax.w[static_cast<size_t>(i)] = c * h / 3.0;
  }
  return ax;
}

double binom_loglik(double z, double n, double l) {
  // z * log sigmoid(l) + (n - z) * log sigmoid(-l)
  return -z * softplus(-l) - (n - z) * softplus(l);
}

double normal_pdf(double x, double mean, double var) {
  double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
}

// Log prior density of u = log tau^2 (unnormalized).
double log_tau_prior_u(const HierHyperparams& hp, double u) {
  if (hp.tau_prior == TauPrior::inverse_gamma) {
    // IG(shape, rate) on tau^2, with the e^u Jacobian folded in
    return -hp.tau_ig_shape * u - hp.tau_ig_rate * std::exp(-u);
  }
  // Half-Cauchy(scale) on tau: p(u) proportional to e^{u/2} / (1 + e^u / s^2)
  double s2 = hp.tau_hc_scale * hp.tau_hc_scale;
  return 0.5 * u - std::log1p(std::exp(u) / s2);
}

// Per-theta prior weight with mu_g and tau^2 marginalized:
//   w_g(theta) = P(zeta = g) * int p(u) N(theta; center_g, sd_g^2 + e^u) du
struct ThetaPrior {
  std::vector<double> g0, g1;  // per theta-node, components scaled by P(zeta)
  bool clustered = true;
  double total(size_t i) const { return clustered ? g0[i] + g1[i] : g0[i]; }
};

ThetaPrior theta_prior_weights(GridModel model, const Axis& theta,
                               const HierHyperparams& hp, const GridOptions& opt) {
  Axis u = make_axis(opt.log_tau2_lo, opt.log_tau2_hi, opt.n_tau);
  size_t nu = u.x.size();
  std::vector<double> pu(nu);
  double lmax = -1e300;
  for (size_t j = 0; j < nu; ++j) {
    pu[j] = log_tau_prior_u(hp, u.x[j]);
    lmax = std::max(lmax, pu[j]);
  }
  for (size_t j = 0; j < nu; ++j) pu[j] = std::exp(pu[j] - lmax) * u.w[j];

  ThetaPrior out;
  out.clustered = model != GridModel::nc;
  size_t nt = theta.x.size();
  out.g0.assign(nt, 0.0);
  if (out.clustered) out.g1.assign(nt, 0.0);
  double p1 = hp.q_a / (hp.q_a + hp.q_b);  // marginal P(zeta = 1)
  for (size_t i = 0; i < nt; ++i) {
    double th = theta.x[i];
    double a0 = 0.0, a1 = 0.0;
    for (size_t j = 0; j < nu; ++j) {
      double t2 = std::exp(u.x[j]);
      if (out.clustered) {
        a0 += pu[j] * normal_pdf(th, hp.mu0_center, hp.mu0_sd * hp.mu0_sd + t2);
        a1 += pu[j] * normal_pdf(th, hp.mu1_center, hp.mu1_sd * hp.mu1_sd + t2);
      } else {
        a0 += pu[j] * normal_pdf(th, hp.nc_mu_center, hp.nc_mu_sd * hp.nc_mu_sd + t2);
      }
    }
    if (out.clustered) {
      out.g0[i] = (1.0 - p1) * a0;
      out.g1[i] = p1 * a1;
    } else {
      out.g0[i] = a0;
    }
  }
  return out;
}

double empirical_logit(double z, long n) {
  return logit((z + 0.5) / (static_cast<double>(n) + 1.0));
}

}  // namespace

GridPosterior grid_posterior(GridModel model, const IndicationQuasiData& d,
                             const HierHyperparams& hp, const GridOptions& opt) {
  hp.validate();
  if (d.n_h <= 0 || d.n_l <= 0) throw DomainError("grid oracle needs data on both doses");
  if (model == GridModel::v2 && d.n_h1 <= 0)
    throw DomainError("grid oracle for v2 needs stage-1 data");

  double lc = empirical_logit(d.z_h, d.n_h);
  double tc = empirical_logit(d.z_l, d.n_l) - lc;
  Axis lax = make_axis(lc - opt.logit_halfwidth, lc + opt.logit_halfwidth, opt.n_logit);
  Axis tax = make_axis(tc - opt.theta_halfwidth, tc + opt.theta_halfwidth, opt.n_logit);
  ThetaPrior tp = theta_prior_weights(model, tax, hp, opt);

  size_t nl = lax.x.size(), nt = tax.x.size();
  bool v2 = model == GridModel::v2;

  Axis bax;
  std::vector<double> v_spike, v_slab;
  if (v2) {
    bax = make_axis(-opt.beta_halfwidth, opt.beta_halfwidth, opt.n_logit);
    size_t nb = bax.x.size();
    v_spike.resize(nb);
    v_slab.resize(nb);
    for (size_t j = 0; j < nb; ++j) {
      // marginal P(delta = spike) = E[omega] = 1/2 under the uniform prior
      v_spike[j] = 0.5 * normal_pdf(bax.x[j], 0.0, hp.spike_var);
      v_slab[j] = 0.5 * normal_pdf(bax.x[j], 0.0, hp.slab_var);
    }
  }

  double nh = static_cast<double>(d.n_h), nlow = static_cast<double>(d.n_l);
  double nh1 = static_cast<double>(d.n_h1);
  double mass = 0, acc_qh = 0, acc_ql = 0, acc_c1 = 0, acc_beta = 0, acc_spike = 0;
  for (size_t i = 0; i < nl; ++i) {
    double l = lax.x[i];
    double a = std::exp(binom_loglik(d.z_h, nh, l) - hp.qh_a * softplus(-l) -
                        hp.qh_b * softplus(l)) *
               lax.w[i];
    if (a == 0.0) continue;

    double sb = 0, sb_q = 0, sb_c1 = 0;
    for (size_t j = 0; j < nt; ++j) {
      double m = l + tax.x[j];
      double b = std::exp(binom_loglik(d.z_l, nlow, m)) * tax.w[j];
      double wt = b * tp.total(j);
      sb += wt;
      sb_q += wt * sigmoid(m);
      if (tp.clustered) sb_c1 += b * tp.g1[j];
    }

    double sc = 1.0, sc_b = 0.0, sc_spike = 0.0;
    if (v2) {
      sc = 0.0;
      for (size_t j = 0; j < bax.x.size(); ++j) {
        double c = std::exp(binom_loglik(d.z_h1, nh1, l + bax.x[j])) * bax.w[j];
        double sp = c * v_spike[j], sl = c * v_slab[j];
        sc += sp + sl;
        sc_b += (sp + sl) * bax.x[j];
        sc_spike += sp;
      }
    }

    mass += a * sb * sc;
    acc_qh += a * sb * sc * sigmoid(l);
    acc_ql += a * sb_q * sc;
    if (tp.clustered) acc_c1 += a * sb_c1 * sc;
    if (v2) {
      acc_beta += a * sb * sc_b;
      acc_spike += a * sb * sc_spike;
    }
  }
  if (!(mass > 0.0)) throw DomainError("grid oracle: zero posterior mass (grid too narrow?)");

  GridPosterior out;
  out.q_high = acc_qh / mass;
  out.q_low = acc_ql / mass;
  out.pr_cluster_low = tp.clustered ? acc_c1 / mass : 0.0;
  out.beta_mean = v2 ? acc_beta / mass : 0.0;
  out.pr_spike = v2 ? acc_spike / mass : 0.0;
  return out;
}

}  // namespace romi::oracle
