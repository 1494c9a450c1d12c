#include "romi/hiermodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "romi/errors.hpp"
#include "romi/mathutil.hpp"
#include "romi/rng.hpp"

namespace romi {

namespace {

constexpr double kTau2Floor = 1e-8;
constexpr double kTau2Cap = 1e12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// log-likelihood of one quasi-binomial cell: z*log(Q) + (n-z)*log(1-Q) at
// Q = sigmoid(l)
inline double cell_ll(double z, long n, double l) {
  return -z * softplus(-l) - (n - z) * softplus(l);
}

enum class Kind { v1, nc, v2 };

class Sampler {
 public:
  Sampler(Kind kind, const QuasiData& data, const HierHyperparams& hp,
          const McmcConfig& mc)
      : kind_(kind), hp_(hp), mc_(mc), rng_(RngStream::derive(mc.seed, 0x6d636d63ull)) {
    hp.validate();
    mc.validate();
    for (int i = 0; i < static_cast<int>(data.indications.size()); ++i) {
      const auto& d = data.indications[i];
      if (!d.active) continue;
      if (d.n_h < 0 || d.n_l < 0 || d.n_h1 < 0)
        throw DomainError("negative sample size in quasi data");
      if (d.z_h < 0 || d.z_h > d.n_h || d.z_l < 0 || d.z_l > d.n_l ||
          d.z_h1 < 0 || d.z_h1 > d.n_h1)
        throw DomainError("quasi-events outside [0, n]");
      orig_.push_back(i);
      if (mc.prior_only) {
        zh_.push_back(0); nh_.push_back(0);
        zl_.push_back(0); nl_.push_back(0);
        zh1_.push_back(0); nh1_.push_back(0);
      } else {
        zh_.push_back(d.z_h); nh_.push_back(d.n_h);
        zl_.push_back(d.z_l); nl_.push_back(d.n_l);
        zh1_.push_back(d.z_h1); nh1_.push_back(d.n_h1);
      }
    }
    m_ = static_cast<int>(orig_.size());
    if (m_ == 0) throw DegenerateData("hierarchical fit needs at least one active indication");
    k_total_ = static_cast<int>(data.indications.size());
    init_state();
  }

  PosteriorSummary run();

 private:
  void init_state();
  void update_logit_qh(int j, bool adapt);
  void update_theta(int j, bool adapt);
  void update_shift(bool adapt);
  void update_beta(int j, bool adapt);
  void update_zeta();
  void update_q();
  void update_delta();
  void update_omega();
  void update_mu();
  void update_tau2(bool adapt);

  double theta_mean(int j) const {
    if (kind_ == Kind::nc) return mu_nc_;
    return zeta_[j] ? mu1_ : mu0_;
  }
  double lp_logit_qh(double l) const {
    return -hp_.qh_a * softplus(-l) - hp_.qh_b * softplus(l);
  }
  void adapt_step(double& log_step, double alpha, long& count) {
    double gamma = std::pow(static_cast<double>(++count), -0.6);
    log_step += gamma * (alpha - mc_.target_accept);
    log_step = std::clamp(log_step, -7.0, 3.0);
  }

  Kind kind_;
  const HierHyperparams& hp_;
  const McmcConfig& mc_;
  RngStream rng_;
  int m_ = 0;        // active indications
  int k_total_ = 0;  // indications in the input, active or not
  std::vector<int> orig_;
  std::vector<double> zh_, zl_, zh1_;
  std::vector<long> nh_, nl_, nh1_;

  // state
  std::vector<double> l_, th_, be_;
  std::vector<int> zeta_, delta_;
  double mu0_ = 0, mu1_ = 0, mu_nc_ = 0, tau2_ = 0.1, q_ = 0.5, omega_ = 0.5;
  // cached likelihood cells
  std::vector<double> llh_, lll_, llh1_;
  std::vector<double> shift_lll_;  // proposal buffer for the group move
  // adaptation
  std::vector<double> lstep_l_, lstep_th_, lstep_be_;
  std::vector<long> acnt_l_, acnt_th_, acnt_be_;
  double lstep_tau_ = -1.0;
  long acnt_tau_ = 0;
  double lstep_sh_ = 0.0;
  long acnt_sh_ = 0;
  // post-burn-in acceptance tracking
  long att_l_ = 0, acc_l_ = 0, att_th_ = 0, acc_th_ = 0, att_be_ = 0, acc_be_ = 0;
  long att_sh_ = 0, acc_sh_ = 0;
  long floor_hits_ = 0, tau_draws_ = 0;
};

void Sampler::init_state() {
  l_.resize(m_);
  th_.resize(m_);
  be_.assign(m_, 0.0);
  zeta_.resize(m_);
  delta_.assign(m_, 1);
  llh_.resize(m_);
  lll_.resize(m_);
  llh1_.resize(m_);
  shift_lll_.resize(m_);
  lstep_sh_ = std::log(mc_.init_step);
  lstep_l_.assign(m_, std::log(mc_.init_step));
  lstep_th_.assign(m_, std::log(mc_.init_step));
  lstep_be_.assign(m_, std::log(mc_.init_step));
  acnt_l_.assign(m_, 0);
  acnt_th_.assign(m_, 0);
  acnt_be_.assign(m_, 0);
  for (int j = 0; j < m_; ++j) {
    double qh = nh_[j] > 0 ? (zh_[j] + 0.5) / (nh_[j] + 1.0) : 0.5;
    double ql = nl_[j] > 0 ? (zl_[j] + 0.5) / (nl_[j] + 1.0) : qh;
    l_[j] = std::clamp(logit(qh), -4.0, 4.0);
    th_[j] = std::clamp(logit(ql) - l_[j], -3.0, 3.0);
    zeta_[j] = th_[j] >= 0.0 ? 1 : 0;
    llh_[j] = cell_ll(zh_[j], nh_[j], l_[j]);
    lll_[j] = cell_ll(zl_[j], nl_[j], l_[j] + th_[j]);
    llh1_[j] = cell_ll(zh1_[j], nh1_[j], l_[j] + be_[j]);
  }
  mu0_ = hp_.mu0_center;
  mu1_ = hp_.mu1_center;
  mu_nc_ = hp_.nc_mu_center;
}

void Sampler::update_logit_qh(int j, bool adapt) {
  double step = std::exp(lstep_l_[j]);
  double prop = l_[j] + step * rng_.normal();
  double nllh = cell_ll(zh_[j], nh_[j], prop);
  double nlll = cell_ll(zl_[j], nl_[j], prop + th_[j]);
  double nllh1 = kind_ == Kind::v2 ? cell_ll(zh1_[j], nh1_[j], prop + be_[j]) : 0.0;
  double cur_llh1 = kind_ == Kind::v2 ? llh1_[j] : 0.0;
  double la = (nllh + nlll + nllh1 + lp_logit_qh(prop)) -
              (llh_[j] + lll_[j] + cur_llh1 + lp_logit_qh(l_[j]));
  double alpha = la >= 0.0 ? 1.0 : std::exp(la);
  bool ok = rng_.uniform() < alpha;
  if (ok) {
    l_[j] = prop;
    llh_[j] = nllh;
    lll_[j] = nlll;
    if (kind_ == Kind::v2) llh1_[j] = nllh1;
  }
  if (adapt) {
    adapt_step(lstep_l_[j], alpha, acnt_l_[j]);
  } else {
    ++att_l_;
    acc_l_ += ok;
  }
}

void Sampler::update_theta(int j, bool adapt) {
  double step = std::exp(lstep_th_[j]);
  double prop = th_[j] + step * rng_.normal();
  double nlll = cell_ll(zl_[j], nl_[j], l_[j] + prop);
  double m = theta_mean(j);
  double dprior = ((th_[j] - m) * (th_[j] - m) - (prop - m) * (prop - m)) / (2.0 * tau2_);
  double la = nlll - lll_[j] + dprior;
  double alpha = la >= 0.0 ? 1.0 : std::exp(la);
  bool ok = rng_.uniform() < alpha;
  if (ok) {
    th_[j] = prop;
    lll_[j] = nlll;
  }
  if (adapt) {
    adapt_step(lstep_th_[j], alpha, acnt_th_[j]);
  } else {
    ++att_th_;
    acc_th_ += ok;
  }
}

// Joint translation of mu and every theta_j.  When tau2 collapses the
// theta_j ride on mu and per-component moves stall; shifting the whole
// group sidesteps that.  The differences theta_j - mu are unchanged, so
// the theta prior and tau2 terms drop out of the ratio and only the
// low-dose cells and the mu prior remain.
void Sampler::update_shift(bool adapt) {
  double step = std::exp(lstep_sh_);
  double d = step * rng_.normal();
  double la = 0.0;
  for (int j = 0; j < m_; ++j) {
    shift_lll_[j] = cell_ll(zl_[j], nl_[j], l_[j] + th_[j] + d);
    la += shift_lll_[j] - lll_[j];
  }
  double c = hp_.nc_mu_center, sd = hp_.nc_mu_sd;
  la += ((mu_nc_ - c) * (mu_nc_ - c) - (mu_nc_ + d - c) * (mu_nc_ + d - c)) /
        (2.0 * sd * sd);
  double alpha = la >= 0.0 ? 1.0 : std::exp(la);
  bool ok = rng_.uniform() < alpha;
  if (ok) {
    for (int j = 0; j < m_; ++j) {
      th_[j] += d;
      lll_[j] = shift_lll_[j];
    }
    mu_nc_ += d;
  }
  if (adapt) {
    adapt_step(lstep_sh_, alpha, acnt_sh_);
  } else {
    ++att_sh_;
    acc_sh_ += ok;
  }
}

void Sampler::update_beta(int j, bool adapt) {
  double var = delta_[j] ? hp_.spike_var : hp_.slab_var;
  double step = std::exp(lstep_be_[j]);
  double prop = be_[j] + step * rng_.normal();
  double nllh1 = cell_ll(zh1_[j], nh1_[j], l_[j] + prop);
  double dprior = (be_[j] * be_[j] - prop * prop) / (2.0 * var);
  double la = nllh1 - llh1_[j] + dprior;
  double alpha = la >= 0.0 ? 1.0 : std::exp(la);
  bool ok = rng_.uniform() < alpha;
  if (ok) {
    be_[j] = prop;
    llh1_[j] = nllh1;
  }
  if (adapt) {
    adapt_step(lstep_be_[j], alpha, acnt_be_[j]);
  } else {
    ++att_be_;
    acc_be_ += ok;
  }
}

void Sampler::update_zeta() {
  double q = std::clamp(q_, 1e-300, 1.0 - 1e-16);
  double lodds_q = std::log(q) - std::log1p(-q);
  for (int j = 0; j < m_; ++j) {
    // same variance in both components: the normal constants cancel
    double d0 = th_[j] - mu0_, d1 = th_[j] - mu1_;
    double lo = lodds_q + (d0 * d0 - d1 * d1) / (2.0 * tau2_);
    zeta_[j] = rng_.uniform() < sigmoid(lo) ? 1 : 0;
  }
}

void Sampler::update_q() {
  long m1 = 0;
  for (int z : zeta_) m1 += z;
  q_ = rng_.beta(hp_.q_a + m1, hp_.q_b + (m_ - m1));
}

void Sampler::update_delta() {
  double w = std::clamp(omega_, 1e-300, 1.0 - 1e-16);
  double lodds = std::log(w) - std::log1p(-w) +
                 0.5 * std::log(hp_.slab_var / hp_.spike_var);
  double dprec = 0.5 * (1.0 / hp_.slab_var - 1.0 / hp_.spike_var);
  for (int j = 0; j < m_; ++j) {
    double lo = lodds + be_[j] * be_[j] * dprec;
    delta_[j] = rng_.uniform() < sigmoid(lo) ? 1 : 0;
  }
}

void Sampler::update_omega() {
  long ns = 0;
  for (int d : delta_) ns += d;
  omega_ = rng_.beta(1.0 + ns, 1.0 + (m_ - ns));
}

void Sampler::update_mu() {
  if (kind_ == Kind::nc) {
    double prior_prec = 1.0 / (hp_.nc_mu_sd * hp_.nc_mu_sd);
    double sum = 0.0;
    for (int j = 0; j < m_; ++j) sum += th_[j];
    double prec = prior_prec + m_ / tau2_;
    double mean = (hp_.nc_mu_center * prior_prec + sum / tau2_) / prec;
    mu_nc_ = mean + rng_.normal() / std::sqrt(prec);
    return;
  }
  for (int g = 0; g < 2; ++g) {
    double center = g ? hp_.mu1_center : hp_.mu0_center;
    double sd = g ? hp_.mu1_sd : hp_.mu0_sd;
    double prior_prec = 1.0 / (sd * sd);
    double sum = 0.0;
    long cnt = 0;
    for (int j = 0; j < m_; ++j)
      if (zeta_[j] == g) {
        sum += th_[j];
        ++cnt;
      }
    double prec = prior_prec + cnt / tau2_;
    double mean = (center * prior_prec + sum / tau2_) / prec;
    double draw = mean + rng_.normal() / std::sqrt(prec);
    (g ? mu1_ : mu0_) = draw;
  }
}

void Sampler::update_tau2(bool adapt) {
  double ss = 0.0;
  for (int j = 0; j < m_; ++j) {
    double d = th_[j] - theta_mean(j);
    ss += d * d;
  }
  ++tau_draws_;
  if (hp_.tau_prior == TauPrior::inverse_gamma) {
    double shape = hp_.tau_ig_shape + 0.5 * m_;
    double rate = hp_.tau_ig_rate + 0.5 * ss;
    double g = rng_.gamma(shape);
    double t = g > 0.0 ? rate / g : kTau2Cap;
    if (t < kTau2Floor) {
      t = kTau2Floor;
      ++floor_hits_;
    }
    tau2_ = std::min(t, kTau2Cap);
    return;
  }
  // Half-Cauchy on tau: random walk on u = log(tau^2)
  auto log_target = [&](double u) {
    double inv = std::exp(-u);
    double lik = -0.5 * m_ * u - 0.5 * ss * inv;
    double s2 = hp_.tau_hc_scale * hp_.tau_hc_scale;
    double prior = 0.5 * u - std::log1p(std::exp(u) / s2);
    return lik + prior;
  };
  double u = std::log(tau2_);
  double step = std::exp(lstep_tau_);
  double prop = u + step * rng_.normal();
  double la = log_target(prop) - log_target(u);
  double alpha = la >= 0.0 ? 1.0 : std::exp(la);
  if (rng_.uniform() < alpha) u = prop;
  if (adapt) adapt_step(lstep_tau_, alpha, acnt_tau_);
  double t = std::exp(u);
  if (t < kTau2Floor) {
    t = kTau2Floor;
    ++floor_hits_;
  }
  tau2_ = std::min(t, kTau2Cap);
}

PosteriorSummary Sampler::run() {
  long kept_target = (mc_.n_iter - mc_.n_burn + mc_.thin - 1) / mc_.thin;
  std::vector<std::vector<double>> qh_chain(m_), ql_chain(m_);
  for (int j = 0; j < m_; ++j) {
    qh_chain[j].reserve(kept_target);
    ql_chain[j].reserve(kept_target);
  }
  std::vector<double> zeta_sum(m_, 0.0), delta_sum(m_, 0.0), be_sum(m_, 0.0);
  double mu0_sum = 0, mu1_sum = 0, mu_nc_sum = 0, tau2_sum = 0, q_sum = 0,
         omega_sum = 0;
  PosteriorSummary out;
  long kept = 0;

  for (long it = 0; it < mc_.n_iter; ++it) {
    bool adapt = it < mc_.n_burn;
    for (int j = 0; j < m_; ++j) update_logit_qh(j, adapt);
    for (int j = 0; j < m_; ++j) update_theta(j, adapt);
    if (kind_ == Kind::nc) update_shift(adapt);
    if (kind_ == Kind::v2) {
      for (int j = 0; j < m_; ++j) update_beta(j, adapt);
      update_delta();
      update_omega();
    }
    if (kind_ != Kind::nc) {
      update_zeta();
      update_q();
    }
    update_mu();
    update_tau2(adapt);

    if (it < mc_.n_burn || (it - mc_.n_burn) % mc_.thin != 0) continue;
    ++kept;
    for (int j = 0; j < m_; ++j) {
      qh_chain[j].push_back(sigmoid(l_[j]));
      ql_chain[j].push_back(sigmoid(l_[j] + th_[j]));
      zeta_sum[j] += zeta_[j];
      delta_sum[j] += delta_[j];
      be_sum[j] += be_[j];
    }
    mu0_sum += mu0_;
    mu1_sum += mu1_;
    mu_nc_sum += mu_nc_;
    tau2_sum += tau2_;
    q_sum += q_;
    omega_sum += omega_;
    if (mc_.keep_chains) {
      out.chain_tau2.push_back(tau2_);
      if (kind_ == Kind::nc) {
        out.chain_mu_nc.push_back(mu_nc_);
      } else {
        out.chain_mu0.push_back(mu0_);
        out.chain_mu1.push_back(mu1_);
        out.chain_q.push_back(q_);
      }
      if (kind_ == Kind::v2) out.chain_omega.push_back(omega_);
    }
  }

  out.kept = kept;
  out.indications.assign(k_total_, IndicationFit{});
  for (auto& f : out.indications) {
    f.q_high = {kNaN, kNaN, kNaN, kNaN};
    f.q_low = {kNaN, kNaN, kNaN, kNaN};
    f.pr_cluster_low = kNaN;
    f.beta_mean = kNaN;
    f.pr_spike = kNaN;
  }
  for (int j = 0; j < m_; ++j) {
    auto& f = out.indications[orig_[j]];
    f.q_high = summarize_chain(qh_chain[j]);
    f.q_low = summarize_chain(ql_chain[j]);
    f.pr_cluster_low = kind_ == Kind::nc ? kNaN : zeta_sum[j] / kept;
    f.beta_mean = kind_ == Kind::v2 ? be_sum[j] / kept : kNaN;
    f.pr_spike = kind_ == Kind::v2 ? delta_sum[j] / kept : kNaN;
  }
  out.mu0_mean = kind_ == Kind::nc ? kNaN : mu0_sum / kept;
  out.mu1_mean = kind_ == Kind::nc ? kNaN : mu1_sum / kept;
  out.mu_nc_mean = kind_ == Kind::nc ? mu_nc_sum / kept : kNaN;
  out.tau2_mean = tau2_sum / kept;
  out.q_mean = kind_ == Kind::nc ? kNaN : q_sum / kept;
  out.omega_mean = kind_ == Kind::v2 ? omega_sum / kept : kNaN;
  out.accept_logit_qh = att_l_ > 0 ? static_cast<double>(acc_l_) / att_l_ : kNaN;
  out.accept_theta = att_th_ > 0 ? static_cast<double>(acc_th_) / att_th_ : kNaN;
  out.accept_beta = att_be_ > 0 ? static_cast<double>(acc_be_) / att_be_ : kNaN;
  out.accept_shift = att_sh_ > 0 ? static_cast<double>(acc_sh_) / att_sh_ : kNaN;
  out.tau2_floor_rate = tau_draws_ > 0 ? static_cast<double>(floor_hits_) / tau_draws_ : 0.0;
  return out;
}

}  // namespace

void HierHyperparams::validate() const {
  if (!(mu0_sd > 0) || !(mu1_sd > 0) || !(nc_mu_sd > 0))
    throw ConfigError("cluster-mean prior sds must be positive");
  if (!(tau_ig_shape > 0) || !(tau_ig_rate > 0) || !(tau_hc_scale > 0))
    throw ConfigError("tau^2 prior parameters must be positive");
  if (!(qh_a > 0) || !(qh_b > 0) || !(q_a > 0) || !(q_b > 0))
    throw ConfigError("beta prior parameters must be positive");
  if (!(spike_var > 0) || !(slab_var >= spike_var))
    throw ConfigError("spike/slab variances invalid (need 0 < spike <= slab)");
}

void McmcConfig::validate() const {
  if (n_iter < 1 || n_burn < 0 || n_burn >= n_iter)
    throw ConfigError("mcmc iteration counts invalid (need 0 <= n_burn < n_iter)");
  if (thin < 1) throw ConfigError("mcmc thin must be >= 1");
  if (!(init_step > 0)) throw ConfigError("mcmc init_step must be positive");
  if (!(target_accept > 0.0 && target_accept < 1.0))
    throw ConfigError("mcmc target_accept must lie in (0,1)");
}

PosteriorSummary fit_v1(const QuasiData& data, const HierHyperparams& hp,
                        const McmcConfig& mc) {
  return Sampler(Kind::v1, data, hp, mc).run();
}

PosteriorSummary fit_nc(const QuasiData& data, const HierHyperparams& hp,
                        const McmcConfig& mc) {
  return Sampler(Kind::nc, data, hp, mc).run();
}

PosteriorSummary fit_v2(const QuasiData& data, const HierHyperparams& hp,
                        const McmcConfig& mc) {
  return Sampler(Kind::v2, data, hp, mc).run();
}

ConjugateFit fit_conjugate(double z, long n, double prior_a, double prior_b) {
  if (!(prior_a > 0) || !(prior_b > 0))
    throw DomainError("conjugate fit needs positive prior parameters");
  if (n < 0 || z < 0 || z > n) throw DomainError("conjugate fit needs 0 <= z <= n");
  return {prior_a + z, prior_b + (n - z)};
}

ChainSummary summarize_chain(const std::vector<double>& x) {
  ChainSummary s;
  const long n = static_cast<long>(x.size());
  if (n == 0) return {kNaN, kNaN, kNaN, kNaN};
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  s.mean = mean;
  if (n < 8) {
    s.sd = 0.0;
    s.mcse = 0.0;
    s.ess = static_cast<double>(n);
    return s;
  }
  double g0 = 0.0;
  for (double v : x) g0 += (v - mean) * (v - mean);
  g0 /= n;
  s.sd = std::sqrt(g0);
  if (g0 <= 0.0) {
    s.mcse = 0.0;
    s.ess = static_cast<double>(n);
    return s;
  }
  auto gamma_at = [&](long k) {
    double g = 0.0;
    for (long i = 0; i + k < n; ++i) g += (x[i] - mean) * (x[i + k] - mean);
    return g / n;
  };
  // Geyer initial monotone positive sequence on paired autocovariances
  double sigma2 = -g0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (long k = 0; k + 1 < n; k += 2) {
    double pair = gamma_at(k) + gamma_at(k + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    sigma2 += 2.0 * pair;
    if (k > n / 2) break;
  }
  sigma2 = std::max(sigma2, g0 / n);
  s.ess = std::min(static_cast<double>(n), n * g0 / sigma2);
  s.mcse = std::sqrt(sigma2 / n);
  return s;
}

}  // namespace romi
