#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "romi/config.hpp"
#include "romi/errors.hpp"
#include "romi/report.hpp"
#include "romi/simengine.hpp"
#include "romi/validation/checks.hpp"
#include "romi/validation/fixtures.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

int env_threads() {
  const char* v = std::getenv("ROMI_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (end == v || *end || n < 0)
    throw romi::ConfigError("ROMI_THREADS must be a non-negative integer");
  return static_cast<int>(n);
}

struct SimulateArgs {
  std::string config;
  long seed = -1;
  long reps = -1;
  std::string out;
  std::string format;
  int threads = -1;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw romi::ConfigError("cannot write output file: " + path);
  f << text;
}

int cmd_simulate(const SimulateArgs& a) {
  romi::RunConfig rc = romi::load_run_config(a.config);
  if (a.seed >= 0) rc.seed = static_cast<uint64_t>(a.seed);
  if (a.reps > 0) rc.n_reps = a.reps;
  if (!a.out.empty()) rc.out_dir = a.out;
  if (!a.format.empty()) {
    if (a.format != "csv" && a.format != "markdown" && a.format != "both")
      throw romi::ConfigError("--format must be csv|markdown|both");
    rc.format = a.format;
  }
  if (a.threads >= 0) rc.threads = a.threads;
  else if (rc.threads == 0) rc.threads = env_threads();

  std::vector<romi::OperatingCharacteristics> rows;
  for (const auto& sc : rc.scenarios) {
    for (romi::DesignKind kind : rc.designs) {
      romi::DesignConfig cfg = rc.base;
      cfg.kind = kind;
      cfg.n_indications = sc.k();
      rows.push_back(romi::simulate(cfg, sc, rc.n_reps, rc.seed, rc.threads));
      std::fprintf(stderr, "done: %s / %s (%ld reps)\n", sc.name.c_str(),
                   romi::design_kind_id(kind), rc.n_reps);
    }
  }

  std::filesystem::create_directories(rc.out_dir);
  std::vector<std::string> outputs;
  std::string markdown = romi::report_markdown(rows);
  if (rc.format == "markdown" || rc.format == "both") {
    write_text(rc.out_dir + "/report.md", markdown);
    outputs.push_back("report.md");
  }
  if (rc.format == "csv" || rc.format == "both") {
    write_text(rc.out_dir + "/report.csv", romi::report_csv(rows));
    outputs.push_back("report.csv");
  }
  write_text(rc.out_dir + "/manifest.json", romi::run_manifest(rc, outputs, kVersion));
  outputs.push_back("manifest.json");
  std::fputs(markdown.c_str(), stdout);
  std::fprintf(stderr, "wrote %zu files to %s\n", outputs.size(), rc.out_dir.c_str());
  return 0;
}

struct CalibrateArgs {
  std::string config;
  double resp_floor = 0.25;
  double cutoff = 0.95;
  double prior_a = 0.1, prior_b = 0.1;
  double delta = 0.0;
  double max_fn = 0.0;
  int n_lo = 5, n_hi = 100;
};

int cmd_calibrate(const CalibrateArgs& a) {
  std::vector<std::pair<std::string, romi::MonitoringLimits>> rows;
  if (!a.config.empty()) {
    romi::RunConfig rc = romi::load_run_config(a.config);
    const auto& sc = rc.scenarios.front();
    for (int k = 0; k < sc.k(); ++k)
      rows.emplace_back(sc.indications[k].name, rc.base.limits_for(k));
  } else {
    romi::MonitoringLimits lim;
    lim.resp_floor = a.resp_floor;
    lim.c_fut = a.cutoff;
    lim.prior_a = a.prior_a;
    lim.prior_b = a.prior_b;
    rows.emplace_back("-", lim);
  }
  std::printf("%-12s %6s %9s %12s\n", "indication", "n", "boundary", "fn_prob");
  for (const auto& [name, lim] : rows) {
    romi::CalibrationResult r =
        romi::calibrate_stage1_n(lim, a.delta, a.max_fn, a.n_lo, a.n_hi);
    std::printf("%-12s %6d %9ld %12.6f\n", name.c_str(), r.n, r.boundary, r.achieved_fn);
  }
  return 0;
}

struct DecideArgs {
  std::string config;
  std::string data;
};

struct DoseRules {
  double pr_tox = 0, pr_fut = 0;
  bool tox_fired = false, fut_fired = false;
  bool evaluated = false;
};

DoseRules eval_rules(const romi::OutcomeCounts& tox_counts,
                     const romi::OutcomeCounts& fut_counts,
                     const romi::MonitoringLimits& lim, double fut_cutoff) {
  DoseRules r;
  long nt = tox_counts.total(), nf = fut_counts.total();
  if (nt == 0 && nf == 0) return r;
  r.evaluated = true;
  if (nt > 0) {
    r.pr_tox = romi::beta_tail(lim.prior_a + tox_counts.tox(),
                               lim.prior_b + (nt - tox_counts.tox()), lim.tox_limit,
                               romi::TailSide::above);
    r.tox_fired = r.pr_tox > lim.c_tox;
  }
  if (nf > 0) {
    r.pr_fut = romi::beta_tail(lim.prior_a + fut_counts.resp(),
                               lim.prior_b + (nf - fut_counts.resp()), lim.resp_floor,
                               romi::TailSide::below);
    r.fut_fired = r.pr_fut > fut_cutoff;
  }
  return r;
}

const char* verdict(const DoseRules& r) {
  if (!r.evaluated) return "no data";
  if (r.tox_fired && r.fut_fired) return "stop: toxicity+futility";
  if (r.tox_fired) return "stop: toxicity";
  if (r.fut_fired) return "stop: futility";
  return "continue";
}

int cmd_decide(const DecideArgs& a) {
  romi::RunConfig rc = romi::load_run_config(a.config);
  romi::ObservedCounts obs = romi::load_observed_counts(a.data);
  romi::DesignConfig cfg = rc.base;
  if (rc.designs.size() != 1)
    throw romi::ConfigError("decide needs exactly one design in the config");
  cfg.kind = rc.designs.front();
  cfg.n_indications = static_cast<int>(obs.indications.size());
  cfg.validate();
  const bool romi_kind = cfg.is_romi();
  const bool pool = cfg.kind == romi::DesignKind::pool;

  std::printf("design %s, stage %s, %zu indication(s)\n",
              romi::design_kind_id(cfg.kind), obs.stage.c_str(),
              obs.indications.size());

  if (obs.stage == "stage1") {
    if (!romi_kind)
      throw romi::ConfigError("stage1 decisions only exist for romi designs");
    for (size_t k = 0; k < obs.indications.size(); ++k) {
      const auto& ind = obs.indications[k];
      const auto& lim = cfg.limits_for(static_cast<int>(k));
      DoseRules r = eval_rules(ind.high.stage1, ind.high.stage1, lim, lim.c_fut);
      std::printf(
          "%-10s n=%-3ld Pr(tox>%.2f)=%.4f Pr(resp<%.2f)=%.4f -> %s\n",
          ind.name.c_str(), ind.high.stage1.total(), lim.tox_limit, r.pr_tox,
          lim.resp_floor, r.pr_fut,
          r.tox_fired || r.fut_fired ? (r.tox_fired ? "drop: toxicity" : "drop: futility")
                                     : "continue to stage 2");
    }
    return 0;
  }

  // pooled counts across indications for the pool design
  romi::OutcomeCounts pool_high, pool_low;
  if (pool) {
    for (const auto& ind : obs.indications) {
      pool_high = pool_high + (ind.high.stage1 + ind.high.stage2);
      pool_low = pool_low + (ind.low.stage1 + ind.low.stage2);
    }
  }

  bool final_stage = obs.stage == "final";
  double fut_cutoff_kind = 0.0;  // chosen per indication below

  std::vector<DoseRules> high_rules(obs.indications.size()),
      low_rules(obs.indications.size());
  for (size_t k = 0; k < obs.indications.size(); ++k) {
    const auto& ind = obs.indications[k];
    const auto& lim = cfg.limits_for(static_cast<int>(k));
    fut_cutoff_kind = final_stage ? lim.c_fut_final : lim.c_fut;
    if (pool) {
      high_rules[k] = eval_rules(pool_high, pool_high, lim, fut_cutoff_kind);
      low_rules[k] = eval_rules(pool_low, pool_low, lim, fut_cutoff_kind);
    } else if (romi_kind) {
      // toxicity pools both stages of the high dose; futility is stage-2 only
      high_rules[k] =
          eval_rules(ind.high.stage1 + ind.high.stage2, ind.high.stage2, lim,
                     fut_cutoff_kind);
      low_rules[k] = eval_rules(ind.low.stage2, ind.low.stage2, lim, fut_cutoff_kind);
    } else {
      high_rules[k] =
          eval_rules(ind.high.stage1 + ind.high.stage2, ind.high.stage1 + ind.high.stage2,
                     lim, fut_cutoff_kind);
      low_rules[k] = eval_rules(ind.low.stage1 + ind.low.stage2,
                                ind.low.stage1 + ind.low.stage2, lim, fut_cutoff_kind);
    }
  }

  if (!final_stage) {
    for (size_t k = 0; k < obs.indications.size(); ++k) {
      const auto& ind = obs.indications[k];
      if (ind.dropped_stage1) {
        std::printf("%-10s dropped at stage 1\n", ind.name.c_str());
        continue;
      }
      std::printf("%-10s high: Pr(tox)=%.4f Pr(fut)=%.4f %s | low: Pr(tox)=%.4f "
                  "Pr(fut)=%.4f %s\n",
                  ind.name.c_str(), high_rules[k].pr_tox, high_rules[k].pr_fut,
                  verdict(high_rules[k]), low_rules[k].pr_tox, low_rules[k].pr_fut,
                  verdict(low_rules[k]));
    }
    return 0;
  }

  // final: acceptability, model fit, OBD per indication
  std::vector<bool> h_ok(obs.indications.size()), l_ok(obs.indications.size());
  for (size_t k = 0; k < obs.indications.size(); ++k) {
    const auto& ind = obs.indications[k];
    bool in_trial = !ind.dropped_stage1;
    h_ok[k] = in_trial && !ind.high.stopped && high_rules[k].evaluated &&
              !high_rules[k].tox_fired && !high_rules[k].fut_fired;
    l_ok[k] = in_trial && !ind.low.stopped && low_rules[k].evaluated &&
              !low_rules[k].tox_fired && !low_rules[k].fut_fired;
  }

  std::vector<double> q_high(obs.indications.size(), 0.0),
      q_low(obs.indications.size(), 0.0);
  if (romi_kind) {
    romi::QuasiData data;
    for (size_t k = 0; k < obs.indications.size(); ++k) {
      const auto& ind = obs.indications[k];
      const auto& u = cfg.utility_for(static_cast<int>(k));
      romi::IndicationQuasiData q;
      q.z_h = romi::quasi_events(u, ind.high.stage2);
      q.n_h = ind.high.stage2.total();
      q.z_l = romi::quasi_events(u, ind.low.stage2);
      q.n_l = ind.low.stage2.total();
      q.z_h1 = romi::quasi_events(u, ind.high.stage1);
      q.n_h1 = ind.high.stage1.total();
      q.active = !ind.dropped_stage1 && (q.n_h > 0 || q.n_l > 0);
      data.indications.push_back(q);
    }
    romi::PosteriorSummary fit =
        cfg.kind == romi::DesignKind::romi_v2   ? fit_v2(data, cfg.hyper, cfg.mcmc)
        : cfg.kind == romi::DesignKind::romi_v1 ? fit_v1(data, cfg.hyper, cfg.mcmc)
                                                : fit_nc(data, cfg.hyper, cfg.mcmc);
    for (size_t k = 0; k < obs.indications.size(); ++k) {
      q_high[k] = fit.indications[k].q_high.mean;
      q_low[k] = fit.indications[k].q_low.mean;
    }
  } else if (pool) {
    const auto& u = cfg.utility_for(0);
    double qh = romi::fit_conjugate(romi::quasi_events(u, pool_high), pool_high.total(),
                                    cfg.hyper.qh_a, cfg.hyper.qh_b)
                    .mean();
    double ql = romi::fit_conjugate(romi::quasi_events(u, pool_low), pool_low.total(),
                                    cfg.hyper.qh_a, cfg.hyper.qh_b)
                    .mean();
    for (size_t k = 0; k < obs.indications.size(); ++k) {
      q_high[k] = qh;
      q_low[k] = ql;
    }
  } else {
    for (size_t k = 0; k < obs.indications.size(); ++k) {
      const auto& ind = obs.indications[k];
      const auto& u = cfg.utility_for(static_cast<int>(k));
      romi::OutcomeCounts all_h = ind.high.stage1 + ind.high.stage2;
      romi::OutcomeCounts all_l = ind.low.stage1 + ind.low.stage2;
      q_high[k] = romi::fit_conjugate(romi::quasi_events(u, all_h), all_h.total(),
                                      cfg.hyper.qh_a, cfg.hyper.qh_b)
                      .mean();
      q_low[k] = romi::fit_conjugate(romi::quasi_events(u, all_l), all_l.total(),
                                     cfg.hyper.qh_a, cfg.hyper.qh_b)
                     .mean();
    }
  }

  for (size_t k = 0; k < obs.indications.size(); ++k) {
    const auto& ind = obs.indications[k];
    if (ind.dropped_stage1) {
      std::printf("%-10s dropped at stage 1 -> no OBD\n", ind.name.c_str());
      continue;
    }
    const char* obd = "none";
    if (h_ok[k] || l_ok[k]) {
      bool pick_low = l_ok[k] && (!h_ok[k] || q_low[k] >= q_high[k] - 1e-12);
      obd = pick_low ? "low" : "high";
    }
    std::printf("%-10s acceptable: high=%s low=%s  Q_high=%.4f Q_low=%.4f -> OBD: %s\n",
                ind.name.c_str(), h_ok[k] ? "yes" : "no", l_ok[k] ? "yes" : "no",
                q_high[k], q_low[k], obd);
  }
  return 0;
}

struct VerifyArgs {
  std::string level = "quick";
  std::string fixtures = "data/fixtures";
  long reps = 2000;
  int threads = 0;
  bool regen = false;
};

int cmd_verify(const VerifyArgs& a) {
  if (a.regen) {
    std::filesystem::create_directories(a.fixtures);
    romi::fixtures::generate_all(a.fixtures);
    std::fprintf(stderr, "regenerated fixtures in %s\n", a.fixtures.c_str());
  }
  std::vector<romi::validation::CheckResult> results =
      a.level == "full"
          ? romi::validation::full_checks(a.fixtures, a.reps, a.threads)
          : romi::validation::quick_checks(a.fixtures);
  int failed = romi::validation::print_results(results);
  if (failed > 0) {
    std::fprintf(stderr, "%d check(s) failed\n", failed);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized two-stage basket trial: simulation and decision engine"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "simulate operating characteristics");
  s->add_option("--config", sim.config, "run configuration file")->required();
  s->add_option("--seed", sim.seed, "master seed override");
  s->add_option("--reps", sim.reps, "replication count override");
  s->add_option("--out", sim.out, "output directory override");
  s->add_option("--format", sim.format, "csv|markdown|both");
  s->add_option("--threads", sim.threads, "worker threads (0 = auto)");

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "smallest stage-1 n meeting a false-negative cap");
  c->add_option("--config", cal.config, "take monitoring limits from this run config");
  c->add_option("--resp-floor", cal.resp_floor, "response floor (without --config)");
  c->add_option("--cutoff", cal.cutoff, "futility cutoff (without --config)");
  c->add_option("--prior-a", cal.prior_a, "beta prior a (without --config)");
  c->add_option("--prior-b", cal.prior_b, "beta prior b (without --config)");
  c->add_option("--delta", cal.delta, "target rate offset above the floor")->required();
  c->add_option("--max-fn", cal.max_fn, "false-negative cap")->required();
  c->add_option("--n-lo", cal.n_lo, "search range low end");
  c->add_option("--n-hi", cal.n_hi, "search range high end");

  DecideArgs dec;
  auto* d = app.add_subcommand("decide", "apply the design rules to observed counts");
  d->add_option("--config", dec.config, "run configuration file")->required();
  d->add_option("--data", dec.data, "observed counts file")->required();

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "run the oracle/consistency checks");
  v->add_option("--level", ver.level, "quick|full")
      ->check(CLI::IsMember({"quick", "full"}));
  v->add_option("--fixtures", ver.fixtures, "fixture directory");
  v->add_option("--reps", ver.reps, "replications for full-level table checks");
  v->add_option("--threads", ver.threads, "worker threads for full-level checks");
  v->add_flag("--regen", ver.regen, "regenerate fixture files first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*s) return cmd_simulate(sim);
    if (*c) return cmd_calibrate(cal);
    if (*d) return cmd_decide(dec);
    if (*v) return cmd_verify(ver);
  } catch (const romi::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
