#include "romi/designs.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "romi/errors.hpp"
#include "romi/rng.hpp"

namespace romi {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

bool dose_stopped(const DoseState& d) {
  return d.status == DoseStatus::stopped_toxicity ||
         d.status == DoseStatus::stopped_futility;
}

void stop_dose(DoseState& d, bool tox, bool fut) {
  if (tox)
    d.status = DoseStatus::stopped_toxicity;
  else if (fut)
    d.status = DoseStatus::stopped_futility;
}

// one block of 2: both doses, enrollment order randomized
void enroll_pair(OutcomeSource& src, RngStream& block_rng, int k, Stage s,
                 DoseState& high, DoseState& low, long n_pairs) {
  OutcomeCounts& h = s == Stage::one ? high.stage1 : high.stage2;
  OutcomeCounts& l = s == Stage::one ? low.stage1 : low.stage2;
  for (long i = 0; i < n_pairs; ++i) {
    if (block_rng.uniform() < 0.5) {
      h.add(src.draw(k, Dose::high, s));
      l.add(src.draw(k, Dose::low, s));
    } else {
      l.add(src.draw(k, Dose::low, s));
      h.add(src.draw(k, Dose::high, s));
    }
  }
}

void enroll_one_dose(OutcomeSource& src, int k, Stage s, Dose dose, DoseState& d,
                     long n) {
  OutcomeCounts& c = s == Stage::one ? d.stage1 : d.stage2;
  for (long i = 0; i < n; ++i) c.add(src.draw(k, dose, s));
}

// argmax over acceptable doses; exact ties go to the low dose
Selection pick(bool h_ok, bool l_ok, double q_h, double q_l) {
  if (h_ok && l_ok) {
    if (std::abs(q_h - q_l) < 1e-12) return Selection::low;
    return q_h > q_l ? Selection::high : Selection::low;
  }
  if (h_ok) return Selection::high;
  if (l_ok) return Selection::low;
  return Selection::none;
}

void finish_selection(IndicationResult& ind, bool h_ok, bool l_ok) {
  ind.selection = pick(h_ok, l_ok, ind.q_high, ind.q_low);
  ind.reason = ind.selection == Selection::none ? SelectReason::no_acceptable_dose
                                                : SelectReason::selected;
  ind.status = IndicationStatus::finished;
}

TrialResult run_romi(const PreparedDesign& prep, OutcomeSource& src,
                     RngStream& block_rng, uint64_t fit_seed) {
  const DesignConfig& cfg = prep.cfg();
  const int K = cfg.n_indications;
  TrialResult out;
  out.indications.resize(K);
  for (auto& ind : out.indications) {
    ind.q_high = kNaN;
    ind.q_low = kNaN;
  }

  // stage 1: high dose only, decision at full stage-1 accrual
  for (int k = 0; k < K; ++k) {
    auto& ind = out.indications[k];
    enroll_one_dose(src, k, Stage::one, Dose::high, ind.high, cfg.stage1_n);
    const auto& bd = prep.bounds(k);
    const auto& s1 = ind.high.stage1;
    bool tox = bd.tox_stop(s1.total(), s1.tox());
    bool fut = bd.fut_stop(s1.total(), s1.resp());
    if (tox || fut) {
      stop_dose(ind.high, tox, fut);
      ind.low.status = DoseStatus::completed;  // never opened
      ind.status = IndicationStatus::dropped_stage1;
      ind.reason = SelectReason::dropped_stage1;
    }
  }

  // stage 2 up to the interim look
  const long interim = prep.interim_per_dose();
  for (int k = 0; k < K; ++k) {
    auto& ind = out.indications[k];
    if (ind.status != IndicationStatus::active) continue;
    enroll_pair(src, block_rng, k, Stage::two, ind.high, ind.low, interim);
    const auto& bd = prep.bounds(k);
    // toxicity pools both stages for the high dose; futility is stage-2 only
    auto pooled_h = ind.high.pooled();
    stop_dose(ind.high, bd.tox_stop(pooled_h.total(), pooled_h.tox()),
              bd.fut_stop(ind.high.stage2.total(), ind.high.stage2.resp()));
    stop_dose(ind.low, bd.tox_stop(ind.low.stage2.total(), ind.low.stage2.tox()),
              bd.fut_stop(ind.low.stage2.total(), ind.low.stage2.resp()));
    if (dose_stopped(ind.high) && dose_stopped(ind.low)) {
      ind.status = IndicationStatus::terminated;
      ind.reason = SelectReason::terminated_interim;
    }
  }

  // complete stage 2 for surviving doses
  const long rest = cfg.stage2_n_per_dose - interim;
  for (int k = 0; k < K; ++k) {
    auto& ind = out.indications[k];
    if (ind.status != IndicationStatus::active) continue;
    bool h_alive = ind.high.status == DoseStatus::enrolling;
    bool l_alive = ind.low.status == DoseStatus::enrolling;
    if (h_alive && l_alive) {
      enroll_pair(src, block_rng, k, Stage::two, ind.high, ind.low, rest);
    } else if (h_alive) {
      enroll_one_dose(src, k, Stage::two, Dose::high, ind.high, rest);
    } else if (l_alive) {
      enroll_one_dose(src, k, Stage::two, Dose::low, ind.low, rest);
    }
    if (h_alive) ind.high.status = DoseStatus::completed;
    if (l_alive) ind.low.status = DoseStatus::completed;
  }

  // final analysis: one joint fit over indications still in the trial
  QuasiData qd;
  qd.indications.resize(K);
  bool any_active = false;
  for (int k = 0; k < K; ++k) {
    auto& d = qd.indications[k];
    const auto& ind = out.indications[k];
    d.active = ind.status == IndicationStatus::active;
    if (!d.active) continue;
    any_active = true;
    const auto& u = cfg.utility_for(k);
    d.z_h = quasi_events(u, ind.high.stage2);
    d.n_h = ind.high.stage2.total();
    d.z_l = quasi_events(u, ind.low.stage2);
    d.n_l = ind.low.stage2.total();
    if (cfg.kind == DesignKind::romi_v2) {
      d.z_h1 = quasi_events(u, ind.high.stage1);
      d.n_h1 = ind.high.stage1.total();
    }
  }
  if (any_active) {
    McmcConfig mc = cfg.mcmc;
    mc.seed = fit_seed;
    PosteriorSummary fit;
    switch (cfg.kind) {
      case DesignKind::romi_v2: fit = fit_v2(qd, cfg.hyper, mc); break;
      case DesignKind::romi_v1_nc: fit = fit_nc(qd, cfg.hyper, mc); break;
      default: fit = fit_v1(qd, cfg.hyper, mc); break;
    }
    for (int k = 0; k < K; ++k) {
      auto& ind = out.indications[k];
      if (ind.status != IndicationStatus::active) continue;
      const auto& bd = prep.bounds(k);
      ind.q_high = fit.indications[k].q_high.mean;
      ind.q_low = fit.indications[k].q_low.mean;
      auto pooled_h = ind.high.pooled();
      bool h_ok = ind.high.status == DoseStatus::completed &&
                  !bd.tox_stop(pooled_h.total(), pooled_h.tox()) &&
                  !bd.fut_stop_final(ind.high.stage2.total(), ind.high.stage2.resp());
      bool l_ok = ind.low.status == DoseStatus::completed &&
                  !bd.tox_stop(ind.low.stage2.total(), ind.low.stage2.tox()) &&
                  !bd.fut_stop_final(ind.low.stage2.total(), ind.low.stage2.resp());
      finish_selection(ind, h_ok, l_ok);
    }
  }

  for (const auto& ind : out.indications) out.total_n += ind.n();
  return out;
}

TrialResult run_independent(const PreparedDesign& prep, OutcomeSource& src,
                            RngStream& block_rng) {
  const DesignConfig& cfg = prep.cfg();
  const int K = cfg.n_indications;
  const long interim = prep.interim_per_dose();
  const long rest = cfg.indep_n_per_dose - interim;
  TrialResult out;
  out.indications.resize(K);

  for (int k = 0; k < K; ++k) {
    auto& ind = out.indications[k];
    ind.q_high = kNaN;
    ind.q_low = kNaN;
    enroll_pair(src, block_rng, k, Stage::two, ind.high, ind.low, interim);
    const auto& bd = prep.bounds(k);
    stop_dose(ind.high, bd.tox_stop(ind.high.stage2.total(), ind.high.stage2.tox()),
              bd.fut_stop(ind.high.stage2.total(), ind.high.stage2.resp()));
    stop_dose(ind.low, bd.tox_stop(ind.low.stage2.total(), ind.low.stage2.tox()),
              bd.fut_stop(ind.low.stage2.total(), ind.low.stage2.resp()));
    if (dose_stopped(ind.high) && dose_stopped(ind.low)) {
      ind.status = IndicationStatus::terminated;
      ind.reason = SelectReason::terminated_interim;
      continue;
    }
    bool h_alive = ind.high.status == DoseStatus::enrolling;
    bool l_alive = ind.low.status == DoseStatus::enrolling;
    if (h_alive && l_alive) {
      enroll_pair(src, block_rng, k, Stage::two, ind.high, ind.low, rest);
    } else if (h_alive) {
      enroll_one_dose(src, k, Stage::two, Dose::high, ind.high, rest);
    } else if (l_alive) {
      enroll_one_dose(src, k, Stage::two, Dose::low, ind.low, rest);
    }
    if (h_alive) ind.high.status = DoseStatus::completed;
    if (l_alive) ind.low.status = DoseStatus::completed;

    const auto& u = cfg.utility_for(k);
    ind.q_high = fit_conjugate(quasi_events(u, ind.high.stage2),
                               ind.high.stage2.total(), cfg.hyper.qh_a,
                               cfg.hyper.qh_b)
                     .mean();
    ind.q_low = fit_conjugate(quasi_events(u, ind.low.stage2),
                              ind.low.stage2.total(), cfg.hyper.qh_a,
                              cfg.hyper.qh_b)
                    .mean();
    bool h_ok = ind.high.status == DoseStatus::completed &&
                !bd.tox_stop(ind.high.stage2.total(), ind.high.stage2.tox()) &&
                !bd.fut_stop_final(ind.high.stage2.total(), ind.high.stage2.resp());
    bool l_ok = ind.low.status == DoseStatus::completed &&
                !bd.tox_stop(ind.low.stage2.total(), ind.low.stage2.tox()) &&
                !bd.fut_stop_final(ind.low.stage2.total(), ind.low.stage2.resp());
    finish_selection(ind, h_ok, l_ok);
  }

  for (const auto& ind : out.indications) out.total_n += ind.n();
  return out;
}

TrialResult run_pool(const PreparedDesign& prep, OutcomeSource& src,
                     RngStream& block_rng) {
  const DesignConfig& cfg = prep.cfg();
  const int K = cfg.n_indications;
  const long cap = prep.pool_cap_per_dose();
  const long interim = prep.interim_per_dose();
  TrialResult out;
  out.indications.resize(K);
  for (auto& ind : out.indications) {
    ind.q_high = kNaN;
    ind.q_low = kNaN;
  }

  // indication labels cycle through the pooled accrual sequence
  long patient_idx = 0;
  auto enroll = [&](Dose dose) {
    int k = static_cast<int>(patient_idx++ % K);
    auto& d = dose == Dose::high ? out.indications[k].high : out.indications[k].low;
    d.stage2.add(src.draw(k, dose, Stage::two));
  };
  auto enroll_block = [&]() {
    if (block_rng.uniform() < 0.5) {
      enroll(Dose::high);
      enroll(Dose::low);
    } else {
      enroll(Dose::low);
      enroll(Dose::high);
    }
  };
  auto pooled = [&](Dose dose) {
    OutcomeCounts c;
    for (const auto& ind : out.indications)
      c = c + (dose == Dose::high ? ind.high.stage2 : ind.low.stage2);
    return c;
  };

  for (long i = 0; i < interim; ++i) enroll_block();

  const auto& bd = prep.bounds(0);  // pooled rules: shared limits
  OutcomeCounts ph = pooled(Dose::high);
  OutcomeCounts pl = pooled(Dose::low);
  bool h_tox = bd.tox_stop(ph.total(), ph.tox());
  bool h_fut = bd.fut_stop(ph.total(), ph.resp());
  bool l_tox = bd.tox_stop(pl.total(), pl.tox());
  bool l_fut = bd.fut_stop(pl.total(), pl.resp());
  bool h_stopped = h_tox || h_fut;
  bool l_stopped = l_tox || l_fut;
  for (auto& ind : out.indications) {
    stop_dose(ind.high, h_tox, h_fut);
    stop_dose(ind.low, l_tox, l_fut);
  }

  if (h_stopped && l_stopped) {
    for (auto& ind : out.indications) {
      ind.status = IndicationStatus::terminated;
      ind.reason = SelectReason::terminated_interim;
    }
  } else {
    const long rest = cap - interim;
    if (!h_stopped && !l_stopped) {
      for (long i = 0; i < rest; ++i) enroll_block();
    } else {
      Dose alive = h_stopped ? Dose::low : Dose::high;
      for (long i = 0; i < rest; ++i) enroll(alive);
    }
    for (auto& ind : out.indications) {
      if (!h_stopped) ind.high.status = DoseStatus::completed;
      if (!l_stopped) ind.low.status = DoseStatus::completed;
    }

    // final: pooled acceptability, pooled conjugate utilities, one OBD for all
    ph = pooled(Dose::high);
    pl = pooled(Dose::low);
    double z_h = 0.0, z_l = 0.0;
    for (int k = 0; k < K; ++k) {
      const auto& u = cfg.utility_for(k);
      z_h += quasi_events(u, out.indications[k].high.stage2);
      z_l += quasi_events(u, out.indications[k].low.stage2);
    }
    double q_h = fit_conjugate(z_h, ph.total(), cfg.hyper.qh_a, cfg.hyper.qh_b).mean();
    double q_l = fit_conjugate(z_l, pl.total(), cfg.hyper.qh_a, cfg.hyper.qh_b).mean();
    bool h_ok = !h_stopped && !bd.tox_stop(ph.total(), ph.tox()) &&
                !bd.fut_stop_final(ph.total(), ph.resp());
    bool l_ok = !l_stopped && !bd.tox_stop(pl.total(), pl.tox()) &&
                !bd.fut_stop_final(pl.total(), pl.resp());
    for (auto& ind : out.indications) {
      ind.q_high = q_h;
      ind.q_low = q_l;
      finish_selection(ind, h_ok, l_ok);
    }
  }

  for (const auto& ind : out.indications) out.total_n += ind.n();
  return out;
}

class ScenarioSource final : public OutcomeSource {
 public:
  ScenarioSource(const PreparedDesign& prep, RngStream rng)
      : prep_(prep), rng_(rng) {}
  BinaryOutcome draw(int k, Dose dose, Stage stage) override {
    return sample_outcome(prep_.joint(k, dose, stage), rng_);
  }

 private:
  const PreparedDesign& prep_;
  RngStream rng_;
};

}  // namespace

const char* to_string(DesignKind k) {
  switch (k) {
    case DesignKind::pool: return "Pool";
    case DesignKind::independent: return "Independent";
    case DesignKind::romi_v1_nc: return "ROMI-v1-NC";
    case DesignKind::romi_v1: return "ROMI-v1";
    case DesignKind::romi_v2: return "ROMI-v2";
  }
  return "?";
}

void DesignConfig::validate() const {
  if (n_indications < 1) throw ConfigError("design needs at least one indication");
  if (stage1_n < 1 || stage2_n_per_dose < 1 || indep_n_per_dose < 1)
    throw ConfigError("design sample sizes must be positive");
  auto check_size = [&](size_t n, const char* what) {
    if (n != 1 && n != static_cast<size_t>(n_indications)) {
      std::ostringstream oss;
      oss << what << " must have 1 or n_indications entries";
      throw ConfigError(oss.str());
    }
  };
  check_size(limits.size(), "monitoring limits");
  check_size(utilities.size(), "utility tables");
  for (const auto& l : limits) l.validate();
  for (const auto& u : utilities) u.validate();
  hyper.validate();
  mcmc.validate();
  if (kind == DesignKind::pool) {
    if (limits.size() != 1)
      throw ConfigError("pooled design applies one shared monitoring rule");
    if (pool_total_effective() < 2 || pool_total_effective() % 2 != 0)
      throw ConfigError("pool total size must be a positive even number");
  }
}

PreparedDesign::PreparedDesign(const DesignConfig& cfg, const ScenarioSpec& sc)
    : cfg_(cfg), sc_(sc) {
  cfg_.validate();
  sc_.validate();
  if (sc_.k() != cfg_.n_indications)
    throw ConfigError("scenario and design disagree on the indication count");

  pool_cap_per_dose_ = cfg_.pool_total_effective() / 2;
  long per_dose_max = 0;
  long bound_n = 0;
  switch (cfg_.kind) {
    case DesignKind::pool:
      per_dose_max = pool_cap_per_dose_;
      bound_n = pool_cap_per_dose_;
      break;
    case DesignKind::independent:
      per_dose_max = cfg_.indep_n_per_dose;
      bound_n = cfg_.indep_n_per_dose;
      break;
    default:
      per_dose_max = cfg_.stage2_n_per_dose;
      bound_n = cfg_.stage1_n + cfg_.stage2_n_per_dose;  // pooled toxicity look
      break;
  }
  interim_per_dose_ = (per_dose_max + 1) / 2;

  bounds_.reserve(cfg_.limits.size());
  for (const auto& lim : cfg_.limits)
    bounds_.emplace_back(lim, static_cast<int>(bound_n));

  joint_h1_.reserve(sc_.k());
  joint_h2_.reserve(sc_.k());
  joint_l2_.reserve(sc_.k());
  for (int k = 0; k < sc_.k(); ++k) {
    joint_h1_.push_back(effective_joint(sc_, k, Dose::high, Stage::one));
    joint_h2_.push_back(effective_joint(sc_, k, Dose::high, Stage::two));
    joint_l2_.push_back(effective_joint(sc_, k, Dose::low, Stage::two));
  }
}

const JointOutcomeProb& PreparedDesign::joint(int k, Dose dose, Stage stage) const {
  if (dose == Dose::low) return joint_l2_.at(k);
  return stage == Stage::one ? joint_h1_.at(k) : joint_h2_.at(k);
}

TrialResult run_trial_with_source(const PreparedDesign& prep, OutcomeSource& src,
                                  uint64_t seed) {
  RngStream block_rng = RngStream::derive(seed, 2);
  uint64_t fit_seed = RngStream::derive(seed, 3).next_u64();
  switch (prep.cfg().kind) {
    case DesignKind::pool: return run_pool(prep, src, block_rng);
    case DesignKind::independent: return run_independent(prep, src, block_rng);
    default: return run_romi(prep, src, block_rng, fit_seed);
  }
}

TrialResult run_trial(const PreparedDesign& prep, uint64_t seed) {
  ScenarioSource src(prep, RngStream::derive(seed, 1));
  return run_trial_with_source(prep, src, seed);
}

TrialResult run_trial(const DesignConfig& cfg, const ScenarioSpec& sc, uint64_t seed) {
  PreparedDesign prep(cfg, sc);
  return run_trial(prep, seed);
}

}  // namespace romi
