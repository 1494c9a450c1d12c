#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "romi/errors.hpp"
#include "romi/hiermodel.hpp"

using namespace romi;

namespace {

// three indications, stage-2 data favoring the low dose
QuasiData low_favoring() {
  QuasiData qd;
  qd.indications.push_back({10.8, 12.4, 20, 20, 7.6, 14, true});
  qd.indications.push_back({11.2, 12.0, 20, 20, 7.8, 14, true});
  qd.indications.push_back({10.4, 12.8, 20, 20, 7.4, 14, true});
  return qd;
}

McmcConfig fast_mcmc(uint64_t seed) {
  McmcConfig mc;
  mc.n_iter = 5000;
  mc.n_burn = 1500;
  mc.seed = seed;
  return mc;
}

}  // namespace

TEST_CASE("fits are deterministic in the seed") {
  QuasiData qd = low_favoring();
  HierHyperparams hp;
  auto a = fit_v1(qd, hp, fast_mcmc(11));
  auto b = fit_v1(qd, hp, fast_mcmc(11));
  auto c = fit_v1(qd, hp, fast_mcmc(12));
  CHECK(a.indications[0].q_high.mean == b.indications[0].q_high.mean);
  CHECK(a.tau2_mean == b.tau2_mean);
  CHECK(a.indications[0].q_high.mean != c.indications[0].q_high.mean);
}

TEST_CASE("low-favoring data raise q_low and the low-cluster weight") {
  QuasiData qd = low_favoring();
  HierHyperparams hp;
  for (auto* fit : {&fit_v1, &fit_v2}) {
    auto s = (*fit)(qd, hp, fast_mcmc(21));
    for (int k = 0; k < 3; ++k) {
      CHECK(s.indications[k].q_low.mean > s.indications[k].q_high.mean);
      CHECK(s.indications[k].pr_cluster_low > 0.5);
    }
  }
  auto s = fit_nc(qd, hp, fast_mcmc(21));
  CHECK(s.mu_nc_mean > 0.0);  // common mean pulled positive
  for (int k = 0; k < 3; ++k)
    CHECK(s.indications[k].q_low.mean > s.indications[k].q_high.mean);
}

TEST_CASE("per-variant NaN conventions for unused globals") {
  QuasiData qd = low_favoring();
  HierHyperparams hp;
  auto v1 = fit_v1(qd, hp, fast_mcmc(3));
  CHECK(std::isnan(v1.mu_nc_mean));
  CHECK(std::isnan(v1.omega_mean));
  CHECK(std::isnan(v1.indications[0].beta_mean));
  CHECK(std::isnan(v1.indications[0].pr_spike));
  CHECK_FALSE(std::isnan(v1.mu0_mean));
  CHECK_FALSE(std::isnan(v1.q_mean));

  auto nc = fit_nc(qd, hp, fast_mcmc(3));
  CHECK(std::isnan(nc.mu0_mean));
  CHECK(std::isnan(nc.mu1_mean));
  CHECK(std::isnan(nc.q_mean));
  CHECK(std::isnan(nc.indications[0].pr_cluster_low));
  CHECK_FALSE(std::isnan(nc.mu_nc_mean));

  auto v2 = fit_v2(qd, hp, fast_mcmc(3));
  CHECK_FALSE(std::isnan(v2.omega_mean));
  CHECK_FALSE(std::isnan(v2.indications[0].beta_mean));
  CHECK(v2.indications[0].pr_spike >= 0.0);
  CHECK(v2.indications[0].pr_spike <= 1.0);
}

TEST_CASE("inactive indications are excluded but keep their slots") {
  QuasiData qd = low_favoring();
  qd.indications[1].active = false;
  HierHyperparams hp;
  auto s = fit_v1(qd, hp, fast_mcmc(5));
  REQUIRE(s.indications.size() == 3);
  CHECK(std::isnan(s.indications[1].q_high.mean));
  CHECK(std::isnan(s.indications[1].q_low.mean));
  CHECK_FALSE(std::isnan(s.indications[0].q_high.mean));
  CHECK_FALSE(std::isnan(s.indications[2].q_high.mean));

  // the fit sees only the active rows: dropping the row entirely must agree
  QuasiData two;
  two.indications.push_back(qd.indications[0]);
  two.indications.push_back(qd.indications[2]);
  auto t = fit_v1(two, hp, fast_mcmc(5));
  CHECK(t.indications[0].q_high.mean == s.indications[0].q_high.mean);
  CHECK(t.indications[1].q_low.mean == s.indications[2].q_low.mean);
}

TEST_CASE("degenerate and out-of-range data are rejected") {
  HierHyperparams hp;
  QuasiData empty;
  CHECK_THROWS_AS(fit_v1(empty, hp, fast_mcmc(1)), DegenerateData);
  QuasiData inactive = low_favoring();
  for (auto& d : inactive.indications) d.active = false;
  CHECK_THROWS_AS(fit_v1(inactive, hp, fast_mcmc(1)), DegenerateData);
  QuasiData bad = low_favoring();
  bad.indications[0].z_h = 25.0;  // exceeds n_h = 20
  CHECK_THROWS_AS(fit_v1(bad, hp, fast_mcmc(1)), DomainError);
  bad = low_favoring();
  bad.indications[2].n_l = -1;
  CHECK_THROWS_AS(fit_nc(bad, hp, fast_mcmc(1)), DomainError);
}

TEST_CASE("config validation names the broken constraint class") {
  HierHyperparams hp;
  hp.nc_mu_sd = 0.0;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
  hp = HierHyperparams{};
  hp.spike_var = 0.5;
  hp.slab_var = 0.01;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
  hp = HierHyperparams{};
  hp.tau_ig_rate = -1.0;
  CHECK_THROWS_AS(hp.validate(), ConfigError);

  McmcConfig mc;
  mc.n_burn = mc.n_iter;
  CHECK_THROWS_AS(mc.validate(), ConfigError);
  mc = McmcConfig{};
  mc.thin = 0;
  CHECK_THROWS_AS(mc.validate(), ConfigError);
}

TEST_CASE("kept-draw bookkeeping and chain retention") {
  QuasiData qd = low_favoring();
  HierHyperparams hp;
  McmcConfig mc = fast_mcmc(9);
  mc.thin = 7;
  mc.keep_chains = true;
  auto s = fit_v1(qd, hp, mc);
  long expect = (mc.n_iter - mc.n_burn + mc.thin - 1) / mc.thin;
  CHECK(s.kept == expect);
  CHECK(static_cast<long>(s.chain_tau2.size()) == expect);
  CHECK(static_cast<long>(s.chain_q.size()) == expect);
  CHECK(s.chain_mu_nc.empty());
  auto nc = fit_nc(qd, hp, mc);
  CHECK(static_cast<long>(nc.chain_mu_nc.size()) == expect);
  CHECK(nc.chain_q.empty());
}

TEST_CASE("sampler diagnostics are healthy on routine data") {
  QuasiData qd = low_favoring();
  HierHyperparams hp;
  McmcConfig mc;
  mc.seed = 31;  // library default lengths
  auto s = fit_v2(qd, hp, mc);
  CHECK(s.accept_logit_qh > 0.15);
  CHECK(s.accept_logit_qh < 0.6);
  CHECK(s.accept_theta > 0.15);
  CHECK(s.accept_theta < 0.6);
  CHECK(s.accept_beta > 0.15);
  CHECK(s.accept_beta < 0.6);
  CHECK(s.tau2_floor_rate < 0.05);
  for (int k = 0; k < 3; ++k) {
    CHECK(s.indications[k].q_high.ess > 100.0);
    CHECK(s.indications[k].q_high.mcse < 0.01);
    CHECK(s.indications[k].q_high.sd > 0.0);
  }
}

TEST_CASE("prior-only chains recover the beta prior on q") {
  QuasiData qd = low_favoring();
  HierHyperparams hp;
  McmcConfig mc;
  mc.n_iter = 20000;
  mc.n_burn = 4000;
  mc.seed = 17;
  mc.prior_only = true;
  mc.keep_chains = true;
  auto s = fit_v1(qd, hp, mc);
  auto q = summarize_chain(s.chain_q);
  double want = hp.q_a / (hp.q_a + hp.q_b);
  CHECK(std::abs(q.mean - want) < 4.0 * q.mcse);
  auto mu0 = summarize_chain(s.chain_mu0);
  CHECK(std::abs(mu0.mean - hp.mu0_center) < 4.0 * mu0.mcse);
}

TEST_CASE("conjugate fit matches the closed form") {
  auto f = fit_conjugate(10.8, 20);
  CHECK(f.post_a == doctest::Approx(10.9));
  CHECK(f.post_b == doctest::Approx(9.3));
  CHECK(f.mean() == doctest::Approx(10.9 / 20.2));
  CHECK_THROWS_AS(fit_conjugate(-1.0, 20), DomainError);
  CHECK_THROWS_AS(fit_conjugate(21.0, 20), DomainError);
  CHECK_THROWS_AS(fit_conjugate(5.0, 20, 0.0, 0.1), DomainError);
}

TEST_CASE("summarize_chain on iid and constant sequences") {
  std::vector<double> c(512, 3.5);
  auto s = summarize_chain(c);
  CHECK(s.mean == doctest::Approx(3.5));
  CHECK(s.sd == doctest::Approx(0.0));
  std::vector<double> alt;
  for (int i = 0; i < 4096; ++i) alt.push_back(i % 2 ? 1.0 : -1.0);
  auto a = summarize_chain(alt);
  CHECK(a.mean == doctest::Approx(0.0));
  // perfectly anti-correlated chain: ESS at least the nominal size
  CHECK(a.ess >= 4096.0);
}
