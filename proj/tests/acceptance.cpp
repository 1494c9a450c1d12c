// Release gate: the six acceptance criteria, one PASS/FAIL line each on
// stdout (progress goes to stderr). Exit status = number of failed criteria.
//
//   acceptance [--data-dir DIR] [--reps N] [--threads N]
//
// --data-dir points at the repository root (fixtures under data/fixtures);
// --reps scales the simulation-table criteria (default 2000, the scale the
// reference values were tabulated at).

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "romi/designs.hpp"
#include "romi/errors.hpp"
#include "romi/hiermodel.hpp"
#include "romi/monitoring.hpp"
#include "romi/rng.hpp"
#include "romi/simengine.hpp"
#include "romi/validation/checks.hpp"
#include "romi/validation/fixtures.hpp"
#include "romi/validation/oracles.hpp"

using namespace romi;

namespace {

constexpr uint64_t kSeed = 20240101;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
};

void progress(const std::string& line) { std::fprintf(stderr, "  %s\n", line.c_str()); }

// ---------------------------------------------------------------- criterion 1
// Reference-table reproduction: every gated scenario x design cell within
// +-3.0 selection points, +-3.0 CSP points, +-3 patients.

Criterion table_reproduction(long reps, int threads) {
  auto rows = validation::table_rows();
  int gated = 0, informational = 0, failed = 0;
  double worst = 0.0;
  std::string worst_at = "-";
  for (const auto& row : rows) {
    validation::RowResult r = validation::run_table_row(row, reps, kSeed, threads);
    progress(fmt("%-3s %-12s sel err %.2f  csp err %.2f  N err %.2f  %s", row.scenario.c_str(),
                 row.design.c_str(), r.max_sel_err, r.csp_err, r.n_err,
                 row.gated ? (r.pass ? "ok" : "FAIL") : "informational"));
    if (!row.gated) {
      ++informational;
      continue;
    }
    ++gated;
    if (!r.pass) ++failed;
    double err = std::max({r.max_sel_err, r.csp_err, r.n_err});
    if (err > worst) {
      worst = err;
      worst_at = row.scenario + "/" + row.design;
    }
  }
  return {"table-reproduction", failed == 0,
          fmt("%d gated cells x %ld reps, %d failed, worst err %.2f at %s "
              "(%d informational)",
              gated, reps, failed, worst, worst_at.c_str(), informational)};
}

// ---------------------------------------------------------------- criterion 2
// Drift robustness: with a -0.025 stage-2 drift on the high dose in an
// all-responsive scenario, the drift-aware model keeps CSP within 1 point of
// the base model.

Criterion drift_direction(long reps, int threads) {
  ScenarioSpec sc = validation::drift_scenario(-0.025);
  OperatingCharacteristics v1 =
      simulate(validation::table_design("romi-v1"), sc, reps, kSeed, threads);
  OperatingCharacteristics v2 =
      simulate(validation::table_design("romi-v2"), sc, reps, kSeed, threads);
  return {"drift-direction", v2.csp >= v1.csp - 1.0,
          fmt("CSP v2 %.1f vs v1 %.1f over %ld reps (require v2 >= v1 - 1.0)", v2.csp,
              v1.csp, reps)};
}

// ---------------------------------------------------------------- criterion 3
// Exact-rule oracles: boundaries equal an independent quadrature rule with
// tail probabilities matching to 1e-8; the closed-form false-negative
// probability agrees with brute-force Monte Carlo; calibration equals an
// exhaustive scan.

Criterion exact_rules() {
  MonitoringLimits alt1;
  alt1.tox_limit = 0.30;
  alt1.resp_floor = 0.20;
  alt1.c_tox = 0.90;
  alt1.c_fut = 0.90;
  alt1.c_fut_final = 0.80;
  MonitoringLimits alt2;
  alt2.tox_limit = 0.45;
  alt2.resp_floor = 0.30;
  alt2.c_tox = 0.98;
  alt2.c_fut = 0.92;
  alt2.c_fut_final = 0.92;
  const MonitoringLimits lims[] = {MonitoringLimits{}, alt1, alt2};

  double worst_tail = 0.0;
  for (const auto& lim : lims) {
    StoppingBoundaries b(lim, 81);
    for (int n = 0; n <= 81; ++n) {
      if (b.tox_boundary(n) != oracle::tox_boundary(n, lim) ||
          b.fut_boundary(n) != oracle::fut_boundary(n, lim, lim.c_fut) ||
          b.fut_boundary_final(n) != oracle::fut_boundary(n, lim, lim.c_fut_final))
        return {"exact-rule-oracles", false,
                fmt("boundary mismatch vs quadrature at n=%d (limits %.2f/%.2f)", n,
                    lim.tox_limit, lim.resp_floor)};
    }
    for (int n : {7, 10, 14, 20, 27, 41, 54, 81}) {
      for (long x : {0L, 1L, n / 4L, n / 2L, 3 * n / 4L, n - 1L, static_cast<long>(n)}) {
        double a = lim.prior_a + x, be = lim.prior_b + (n - x);
        for (double t : {lim.resp_floor, lim.tox_limit}) {
          worst_tail = std::max(
              worst_tail, std::fabs(beta_tail(a, be, t, TailSide::above) -
                                    (1.0 - oracle::beta_cdf(a, be, t))));
          worst_tail = std::max(worst_tail, std::fabs(beta_tail(a, be, t, TailSide::below) -
                                                      oracle::beta_cdf(a, be, t)));
        }
      }
    }
  }
  if (worst_tail > 1e-8)
    return {"exact-rule-oracles", false,
            fmt("beta tail disagrees with quadrature by %.3g > 1e-8", worst_tail)};
  progress(fmt("boundaries n=0..81 on 3 limit sets, tail err %.3g", worst_tail));

  const long draws = 1000000;
  RngStream rng = RngStream::derive(2026, 0x666e6d63ULL, 20);
  double worst_z = 0.0;
  for (int c = 0; c < 20; ++c) {
    MonitoringLimits lim;
    lim.resp_floor = 0.15 + 0.30 * rng.uniform();
    double cutoff = 0.85 + 0.14 * rng.uniform();
    int n = 8 + static_cast<int>(rng.below(53));
    double pi = std::clamp(lim.resp_floor + 0.4 * (rng.uniform() - 0.35), 0.02, 0.90);
    double exact = false_negative_prob(n, pi, lim, cutoff);
    oracle::McEstimate mc = oracle::fn_prob_mc(n, pi, lim, cutoff, draws, 555000 + c);
    double se = std::max(mc.se, 1.0 / static_cast<double>(draws));
    worst_z = std::max(worst_z, std::fabs(exact - mc.estimate) / se);
  }
  if (worst_z > 3.0)
    return {"exact-rule-oracles", false,
            fmt("false-negative prob vs 1e6-draw MC: worst |z| = %.2f > 3", worst_z)};
  progress(fmt("false-negative prob, 20 configs x 1e6 draws, worst |z| %.2f", worst_z));

  MonitoringLimits lim;
  struct Case {
    double delta, max_fn;
    int lo, hi;
  };
  const Case cases[] = {
      {0.20, 0.10, 5, 40}, {0.20, 0.05, 5, 60}, {0.15, 0.10, 5, 60}, {0.10, 0.20, 5, 80}};
  for (const auto& c : cases) {
    CalibrationResult got;
    try {
      got = calibrate_stage1_n(lim, c.delta, c.max_fn, c.lo, c.hi);
    } catch (const NoFeasibleN&) {
      return {"exact-rule-oracles", false,
              fmt("calibration infeasible for delta=%.2f max_fn=%.2f", c.delta, c.max_fn)};
    }
    int scan_n = -1;
    double scan_fn = 0.0;
    for (int n = c.lo; n <= c.hi && scan_n < 0; ++n) {
      double fn = oracle::fn_prob_exact(n, lim.resp_floor + c.delta, lim, lim.c_fut);
      if (fn <= c.max_fn) {
        scan_n = n;
        scan_fn = fn;
      }
    }
    if (got.n != scan_n || got.boundary != oracle::fut_boundary(got.n, lim, lim.c_fut) ||
        std::fabs(got.achieved_fn - scan_fn) > 1e-10)
      return {"exact-rule-oracles", false,
              fmt("calibration n=%d disagrees with exhaustive scan n=%d", got.n, scan_n)};
  }
  bool threw = false;
  try {
    calibrate_stage1_n(lim, 0.02, 0.001, 5, 30);
  } catch (const NoFeasibleN&) {
    threw = true;
  }
  if (!threw)
    return {"exact-rule-oracles", false, "infeasible calibration did not throw"};
  return {"exact-rule-oracles", true,
          fmt("boundaries 3x82 exact, tails %.1g, MC worst |z| %.2f, calibration scans equal",
              worst_tail, worst_z)};
}

// ---------------------------------------------------------------- criterion 4
// Sampler validity: prior-only moments, K=1 agreement with the deterministic
// grid posterior, and chain health on a standard stage-2 workload.

Criterion sampler_validity() {
  HierHyperparams hp;

  // (a) prior moments within 3 MCSE
  {
    McmcConfig mc;
    mc.n_iter = 30000;
    mc.n_burn = 5000;
    mc.prior_only = true;
    mc.keep_chains = true;
    mc.seed = 777;
    QuasiData data;
    data.indications.push_back({10, 10, 20, 20, 7, 14, true});
    data.indications.push_back({11, 9, 20, 20, 7, 14, true});
    data.indications.push_back({9, 11, 20, 20, 7, 14, true});
    auto z_of = [](const std::vector<double>& chain, double want) {
      ChainSummary s = summarize_chain(chain);
      return std::fabs(s.mean - want) / std::max(s.mcse, 1e-12);
    };
    PosteriorSummary v1 = fit_v1(data, hp, mc);
    PosteriorSummary v2 = fit_v2(data, hp, mc);
    PosteriorSummary nc = fit_nc(data, hp, mc);
    struct Probe {
      const char* what;
      double z;
    };
    const Probe probes[] = {
        {"v1 q", z_of(v1.chain_q, hp.q_a / (hp.q_a + hp.q_b))},
        {"v1 mu0", z_of(v1.chain_mu0, hp.mu0_center)},
        {"v1 mu1", z_of(v1.chain_mu1, hp.mu1_center)},
        {"v2 omega", z_of(v2.chain_omega, 0.5)},
        {"v2 mu0", z_of(v2.chain_mu0, hp.mu0_center)},
        {"nc mu", z_of(nc.chain_mu_nc, hp.nc_mu_center)},
    };
    for (const auto& p : probes)
      if (p.z > 3.0)
        return {"sampler-validity", false,
                fmt("prior-only %s off by %.2f MCSE > 3", p.what, p.z)};
    progress("prior-only moments within 3 MCSE (q, mu_g, omega, mu_nc)");
  }

  // (b) K=1 posteriors vs the grid oracle: 0.01 for v1/NC, 0.015 for v2
  double worst_frac = 0.0;
  std::string worst_at = "-";
  {
    McmcConfig mc;
    mc.n_iter = 60000;
    mc.n_burn = 10000;
    mc.seed = 90210;
    for (const auto& g : fixtures::golden_datasets()) {
      QuasiData data;
      data.indications.push_back(g.data);
      for (int m = 0; m < 3; ++m) {
        const char* mname = m == 0 ? "v1" : (m == 1 ? "nc" : "v2");
        PosteriorSummary fit = m == 0   ? fit_v1(data, hp, mc)
                               : m == 1 ? fit_nc(data, hp, mc)
                                        : fit_v2(data, hp, mc);
        oracle::GridPosterior ref = oracle::grid_posterior(
            m == 0   ? oracle::GridModel::v1
            : m == 1 ? oracle::GridModel::nc
                     : oracle::GridModel::v2,
            g.data, hp);
        double tol = m == 2 ? 0.015 : 0.01;
        double err = std::max(std::fabs(fit.indications[0].q_high.mean - ref.q_high),
                              std::fabs(fit.indications[0].q_low.mean - ref.q_low));
        progress(fmt("K=1 %s/%s: |mcmc - grid| = %.4f (tol %.3f)", g.name.c_str(), mname,
                     err, tol));
        if (err / tol > worst_frac) {
          worst_frac = err / tol;
          worst_at = fmt("%s/%s err %.4f", g.name.c_str(), mname, err);
        }
      }
    }
    if (worst_frac > 1.0)
      return {"sampler-validity", false, "K=1 grid-oracle mismatch: " + worst_at};
  }

  // (c) health at default chain lengths on a stage-2 workload
  {
    McmcConfig mc;
    mc.seed = 5150;
    QuasiData data;
    data.indications.push_back({10.8, 11.6, 20, 20, 7.56, 14, true});
    data.indications.push_back({11.4, 11.8, 20, 20, 7.84, 14, true});
    data.indications.push_back({10.2, 11.0, 20, 20, 7.00, 14, true});
    for (int m = 0; m < 3; ++m) {
      const char* mname = m == 0 ? "v1" : (m == 1 ? "nc" : "v2");
      PosteriorSummary fit = m == 0   ? fit_v1(data, hp, mc)
                             : m == 1 ? fit_nc(data, hp, mc)
                                      : fit_v2(data, hp, mc);
      for (const auto& f : fit.indications)
        if (f.q_high.ess < 200 || f.q_low.ess < 200)
          return {"sampler-validity", false,
                  fmt("%s ESS %.0f/%.0f below 200 at default config", mname, f.q_high.ess,
                      f.q_low.ess)};
      auto ok = [](double r) { return r >= 0.15 && r <= 0.60; };
      if (!ok(fit.accept_logit_qh) || !ok(fit.accept_theta) ||
          (m == 1 && !ok(fit.accept_shift)) || (m == 2 && !ok(fit.accept_beta)))
        return {"sampler-validity", false,
                fmt("%s acceptance %.2f/%.2f/%.2f/%.2f outside [0.15, 0.6]", mname,
                    fit.accept_logit_qh, fit.accept_theta, fit.accept_beta,
                    fit.accept_shift)};
    }
  }
  return {"sampler-validity", true,
          fmt("priors 3 MCSE, K=1 worst %s (%.0f%% of tol), ESS/acceptance healthy",
              worst_at.c_str(), worst_frac * 100.0)};
}

// ---------------------------------------------------------------- criterion 5
// Determinism: results are bit-identical across worker counts and repeated
// runs, and the model fit is a pure function of its inputs.

Criterion determinism() {
  ScenarioSpec sc = validation::table_scenario("A2");
  const long reps = 32;
  for (const char* design : {"romi-v2", "pool"}) {
    DesignConfig cfg = validation::table_design(design);
    OperatingCharacteristics serial = simulate_serial(cfg, sc, reps, kSeed);
    for (int threads : {1, 4, 16}) {
      OperatingCharacteristics par = simulate(cfg, sc, reps, kSeed, threads);
      if (par.digest != serial.digest || par.avg_total_n != serial.avg_total_n)
        return {"determinism", false,
                fmt("%s digest differs serial vs %d workers", design, threads)};
    }
    OperatingCharacteristics again = simulate(cfg, sc, reps, kSeed, 4);
    if (again.digest != serial.digest)
      return {"determinism", false, fmt("%s digest differs between repeated runs", design)};
    progress(fmt("%s digest %016llx stable for serial/1/4/16 workers", design,
                 static_cast<unsigned long long>(serial.digest)));
  }

  HierHyperparams hp;
  McmcConfig mc;
  mc.seed = 4242;
  QuasiData data;
  data.indications.push_back({10.8, 12.4, 20, 20, 7.6, 14, true});
  data.indications.push_back({11.0, 11.0, 20, 20, 7.0, 14, true});
  PosteriorSummary a = fit_v2(data, hp, mc);
  PosteriorSummary b = fit_v2(data, hp, mc);
  bool pure = a.kept == b.kept && a.tau2_mean == b.tau2_mean &&
              a.omega_mean == b.omega_mean;
  for (size_t k = 0; pure && k < a.indications.size(); ++k)
    pure = a.indications[k].q_high.mean == b.indications[k].q_high.mean &&
           a.indications[k].q_low.mean == b.indications[k].q_low.mean &&
           a.indications[k].pr_cluster_low == b.indications[k].pr_cluster_low;
  if (!pure)
    return {"determinism", false, "repeated fit with identical inputs diverged"};
  return {"determinism", true,
          fmt("digests identical for 1/4/16 workers and reruns (%ld reps x 2 designs); "
              "fits are pure",
              reps)};
}

// ---------------------------------------------------------------- criterion 6
// Structural invariants on every simulated replication: enrollment caps and
// accounting exact, statuses consistent, and no OBD without an acceptable
// completed dose (selections re-derived from the reported counts).

struct InvariantFailure {
  std::string msg;
  bool failed = false;
  void fail(const std::string& m) {
    if (!failed) msg = m;
    failed = true;
  }
};

void check_trial(const PreparedDesign& prep, const TrialResult& tr, InvariantFailure* f) {
  const DesignConfig& cfg = prep.cfg();
  const bool pool = cfg.kind == DesignKind::pool;
  const bool romi = cfg.is_romi();
  const long interim = prep.interim_per_dose();

  if (static_cast<int>(tr.indications.size()) != cfg.n_indications)
    return f->fail("indication count mismatch");
  long sum_n = 0;
  OutcomeCounts pool_high, pool_low;
  for (const auto& ind : tr.indications) {
    sum_n += ind.n();
    pool_high = pool_high + ind.high.pooled();
    pool_low = pool_low + ind.low.pooled();
  }
  if (sum_n != tr.total_n) return f->fail("total_n does not equal the indication sum");

  for (size_t k = 0; k < tr.indications.size(); ++k) {
    const auto& ind = tr.indications[k];
    const auto& lim = cfg.limits_for(static_cast<int>(k));
    const std::string at = fmt("indication %zu", k);

    if (ind.status == IndicationStatus::active) return f->fail(at + " left active");
    if ((ind.selection != Selection::none) != (ind.reason == SelectReason::selected))
      return f->fail(at + ": selection and reason disagree");
    if (ind.status == IndicationStatus::dropped_stage1 &&
        ind.reason != SelectReason::dropped_stage1)
      return f->fail(at + ": dropped indication has wrong reason");
    if (ind.status == IndicationStatus::terminated &&
        ind.reason != SelectReason::terminated_interim)
      return f->fail(at + ": terminated indication has wrong reason");

    // stage-1 cells exist only on the high dose of the romi designs
    if (!romi && (ind.high.stage1.total() != 0 || ind.low.stage1.total() != 0))
      return f->fail(at + ": stage-1 enrollment outside a romi design");
    if (ind.low.stage1.total() != 0) return f->fail(at + ": stage-1 low-dose enrollment");
    if (romi && ind.high.stage1.total() > cfg.stage1_n)
      return f->fail(at + ": stage-1 enrollment above the cap");

    // per-dose stage-2 enrollment is 0, the interim, or the cap (pool caps
    // are collective and checked after the loop)
    if (!pool) {
      long cap = romi ? cfg.stage2_n_per_dose : cfg.indep_n_per_dose;
      for (const DoseState* d : {&ind.high, &ind.low}) {
        long n2 = d->stage2.total();
        if (n2 != 0 && n2 != interim && n2 != cap)
          return f->fail(fmt("%s: stage-2 count %ld not in {0, %ld, %ld}", at.c_str(), n2,
                             interim, cap));
        if (d->status == DoseStatus::completed && ind.status == IndicationStatus::finished &&
            n2 != cap)
          return f->fail(at + ": completed dose below the cap");
        if (d->status == DoseStatus::enrolling) return f->fail(at + ": dose left enrolling");
      }
    }

    if (ind.status == IndicationStatus::dropped_stage1) {
      if (ind.selection != Selection::none) return f->fail(at + ": dropped but selected");
      if (ind.low.n() != 0 || ind.high.stage2.total() != 0)
        return f->fail(at + ": enrollment after a stage-1 drop");
      if (romi && ind.high.stage1.total() != cfg.stage1_n)
        return f->fail(at + ": stage-1 drop without a full stage-1 cohort");
      continue;
    }
    if (ind.status == IndicationStatus::terminated) {
      if (ind.selection != Selection::none) return f->fail(at + ": terminated but selected");
      bool both_stopped = ind.high.status != DoseStatus::completed &&
                          ind.low.status != DoseStatus::completed;
      if (!both_stopped) return f->fail(at + ": terminated with a surviving dose");
      continue;
    }

    // finished: re-derive acceptability from the reported counts and check
    // the selection against it. Toxicity pools all data on a dose; futility
    // is stage-2 only for romi designs (and for the others stage 2 is all
    // there is). Pool-design rules act on the across-indication sums.
    OutcomeCounts h_tox = pool ? pool_high : ind.high.pooled();
    OutcomeCounts l_tox = pool ? pool_low : ind.low.pooled();
    OutcomeCounts h_fut = pool ? pool_high : ind.high.stage2;
    OutcomeCounts l_fut = pool ? pool_low : ind.low.stage2;
    bool h_ok = ind.high.status == DoseStatus::completed &&
                !toxicity_stop(h_tox.total(), h_tox.tox(), lim) &&
                !futility_stop(h_fut.total(), h_fut.resp(), lim, lim.c_fut_final);
    bool l_ok = ind.low.status == DoseStatus::completed &&
                !toxicity_stop(l_tox.total(), l_tox.tox(), lim) &&
                !futility_stop(l_fut.total(), l_fut.resp(), lim, lim.c_fut_final);
    if (ind.selection == Selection::high && !h_ok)
      return f->fail(at + ": high selected without final acceptability");
    if (ind.selection == Selection::low && !l_ok)
      return f->fail(at + ": low selected without final acceptability");
    if (ind.selection == Selection::none && (h_ok || l_ok))
      return f->fail(at + ": acceptable dose but no selection");
    if (h_ok || l_ok) {
      if (std::isnan(ind.q_high) || std::isnan(ind.q_low))
        return f->fail(at + ": selection decided without fitted utilities");
      Selection want = (l_ok && (!h_ok || ind.q_low >= ind.q_high - 1e-12))
                           ? Selection::low
                           : Selection::high;
      if (ind.selection != want)
        return f->fail(at + ": selection disagrees with the utility rule");
    }
  }

  if (pool) {
    long cap = prep.pool_cap_per_dose();
    for (const auto* d : {&pool_high, &pool_low}) {
      long n = d->total();
      if (n != 0 && n != interim && n != cap)
        return f->fail(fmt("pooled dose count %ld not in {0, %ld, %ld}", n, interim, cap));
    }
    for (size_t k = 1; k < tr.indications.size(); ++k) {
      if (tr.indications[k].selection != tr.indications[0].selection)
        return f->fail("pool indications disagree on the shared selection");
    }
  }
}

Criterion structural_invariants(int threads) {
  const long reps = 60;
  long trials = 0;
  InvariantFailure f;
  for (const char* sname : {"A1", "A6"}) {
    ScenarioSpec sc = validation::table_scenario(sname);
    for (const char* design :
         {"pool", "independent", "romi-v1-nc", "romi-v1", "romi-v2"}) {
      DesignConfig cfg = validation::table_design(design);
      PreparedDesign prep(cfg, sc);
      for (long r = 0; r < reps && !f.failed; ++r) {
        TrialResult tr = run_trial(prep, replication_seed(kSeed, r));
        check_trial(prep, tr, &f);
        ++trials;
      }
      if (f.failed)
        return {"structural-invariants", false,
                fmt("%s/%s: %s", sname, design, f.msg.c_str())};
    }
    progress(fmt("%s: %ld trials x 5 designs clean", sname, reps));
  }

  // aggregation identities on the engine output
  for (const char* design : {"pool", "independent", "romi-v1-nc", "romi-v1", "romi-v2"}) {
    OperatingCharacteristics oc = simulate(validation::table_design(design),
                                           validation::table_scenario("A6"), 200, kSeed,
                                           threads);
    double n_sum = 0.0;
    for (const auto& i : oc.indications) {
      if (std::fabs(i.pct_high + i.pct_low + i.pct_none - 100.0) > 1e-9)
        return {"structural-invariants", false,
                fmt("%s: selection percentages sum to %.12f", design,
                    i.pct_high + i.pct_low + i.pct_none)};
      double none = i.pct_dropped_stage1 + i.pct_terminated_interim + i.pct_no_acceptable;
      if (std::fabs(none - i.pct_none) > 1e-9)
        return {"structural-invariants", false,
                fmt("%s: no-selection breakdown sums to %.12f vs %.12f", design, none,
                    i.pct_none)};
      if (i.se_high < 0 || i.se_low < 0 || i.se_none < 0 || i.avg_n < 0)
        return {"structural-invariants", false, fmt("%s: negative summary field", design)};
      n_sum += i.avg_n;
    }
    if (std::fabs(n_sum - oc.avg_total_n) > 1e-9)
      return {"structural-invariants", false,
              fmt("%s: avg_total_n %.12f vs indication sum %.12f", design, oc.avg_total_n,
                  n_sum)};
    if (std::isnan(oc.csp) || oc.csp_se < 0)
      return {"structural-invariants", false, fmt("%s: CSP undefined on a truth scenario", design)};
  }
  return {"structural-invariants", true,
          fmt("%ld trials across 2 scenarios x 5 designs; aggregation identities exact",
              trials)};
}

}  // namespace

int main(int argc, char** argv) {
  std::string data_dir = ".";
  long reps = 2000;
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    auto need = [&](const char* what) -> const char* {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "%s expects a value\n", what);
        std::exit(2);
      }
      return argv[++i];
    };
    if (a == "--data-dir") {
      data_dir = need("--data-dir");
    } else if (a == "--reps") {
      reps = std::strtol(need("--reps"), nullptr, 10);
    } else if (a == "--threads") {
      threads = static_cast<int>(std::strtol(need("--threads"), nullptr, 10));
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", a.c_str());
      return 2;
    }
  }
  if (reps < 1) {
    std::fprintf(stderr, "--reps must be >= 1\n");
    return 2;
  }

  // fixture integrity gates the run: the stored oracle values must agree
  // with live recomputation before anything else is trusted
  std::string fixture_dir = data_dir + "/data/fixtures";
  std::vector<std::string> fixture_fails = fixtures::check_all(fixture_dir);
  if (!fixture_fails.empty()) {
    std::fprintf(stderr, "fixture check failed: %s\n", fixture_fails.front().c_str());
    return 1;
  }
  std::fprintf(stderr, "fixtures verified in %s\n", fixture_dir.c_str());

  std::vector<Criterion> results;
  auto run = [&](const char* label, auto&& fn) {
    std::fprintf(stderr, "[%s]\n", label);
    Criterion c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c = {label, false, std::string("exception: ") + e.what()};
    }
    results.push_back(c);
  };

  run("criterion 1: table reproduction", [&] { return table_reproduction(reps, threads); });
  run("criterion 2: drift direction", [&] { return drift_direction(reps, threads); });
  run("criterion 3: exact rules", [&] { return exact_rules(); });
  run("criterion 4: sampler validity", [&] { return sampler_validity(); });
  run("criterion 5: determinism", [&] { return determinism(); });
  run("criterion 6: structural invariants", [&] { return structural_invariants(threads); });

  int failed = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    const auto& c = results[i];
    std::printf("criterion %zu %-24s %s  %s\n", i + 1, c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.detail.c_str());
    if (!c.pass) ++failed;
  }
  if (failed > 0) std::printf("%d of %zu criteria failed\n", failed, results.size());
  return failed;
}
