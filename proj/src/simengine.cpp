#include "romi/simengine.hpp"

#include <omp.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "romi/digest.hpp"
#include "romi/errors.hpp"
#include "romi/rng.hpp"

namespace romi {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// flat per-replication records, written by rep index so aggregation order
// never depends on scheduling
struct RepTable {
  long reps = 0;
  int k = 0;
  std::vector<uint8_t> sel;      // reps * k
  std::vector<uint8_t> reason;   // reps * k
  std::vector<int32_t> n_ind;    // reps * k
  std::vector<int64_t> total_n;  // reps

  RepTable(long r, int kk) : reps(r), k(kk) {
    sel.assign(r * kk, 0);
    reason.assign(r * kk, 0);
    n_ind.assign(r * kk, 0);
    total_n.assign(r, 0);
  }
  void record(long rep, const TrialResult& t) {
    for (int j = 0; j < k; ++j) {
      const auto& ind = t.indications[j];
      sel[rep * k + j] = static_cast<uint8_t>(ind.selection);
      reason[rep * k + j] = static_cast<uint8_t>(ind.reason);
      n_ind[rep * k + j] = static_cast<int32_t>(ind.n());
    }
    total_n[rep] = t.total_n;
  }
};

OperatingCharacteristics aggregate(const DesignConfig& cfg, const ScenarioSpec& sc,
                                   const RepTable& tab, uint64_t master_seed) {
  const long R = tab.reps;
  const int K = tab.k;
  OperatingCharacteristics oc;
  oc.scenario = sc.name;
  oc.design = to_string(cfg.kind);
  oc.n_reps = R;
  oc.indications.resize(K);

  double total_sum = 0;
  for (long r = 0; r < R; ++r) total_sum += static_cast<double>(tab.total_n[r]);
  oc.avg_total_n = total_sum / R;

  for (int j = 0; j < K; ++j) {
    auto& io = oc.indications[j];
    io.name = sc.indications[j].name;
    long ch = 0, cl = 0, cn = 0, c_drop = 0, c_term = 0, c_noacc = 0;
    double n_sum = 0;
    for (long r = 0; r < R; ++r) {
      auto s = static_cast<Selection>(tab.sel[r * K + j]);
      auto reason = static_cast<SelectReason>(tab.reason[r * K + j]);
      if (s == Selection::high) ++ch;
      else if (s == Selection::low) ++cl;
      else {
        ++cn;
        if (reason == SelectReason::dropped_stage1) ++c_drop;
        else if (reason == SelectReason::terminated_interim) ++c_term;
        else ++c_noacc;
      }
      n_sum += tab.n_ind[r * K + j];
    }
    auto pct = [&](long c) { return 100.0 * c / R; };
    auto se = [&](long c) {
      double p = static_cast<double>(c) / R;
      return 100.0 * std::sqrt(p * (1.0 - p) / R);
    };
    io.pct_high = pct(ch);
    io.pct_low = pct(cl);
    io.pct_none = pct(cn);
    io.se_high = se(ch);
    io.se_low = se(cl);
    io.se_none = se(cn);
    io.pct_dropped_stage1 = pct(c_drop);
    io.pct_terminated_interim = pct(c_term);
    io.pct_no_acceptable = pct(c_noacc);
    io.avg_n = n_sum / R;
  }

  // CSP: per-replication mean of truth indicators, averaged (and its MC se)
  std::vector<int> truth_idx;
  for (int j = 0; j < K; ++j)
    if (sc.indications[j].true_obd != Selection::none) truth_idx.push_back(j);
  if (truth_idx.empty()) {
    oc.csp = kNaN;
    oc.csp_se = kNaN;
  } else {
    double sum = 0, sumsq = 0;
    for (long r = 0; r < R; ++r) {
      double hit = 0;
      for (int j : truth_idx)
        if (static_cast<Selection>(tab.sel[r * K + j]) == sc.indications[j].true_obd)
          hit += 1.0;
      hit /= truth_idx.size();
      sum += hit;
      sumsq += hit * hit;
    }
    double mean = sum / R;
    double var = std::max(0.0, sumsq / R - mean * mean);
    oc.csp = 100.0 * mean;
    oc.csp_se = 100.0 * std::sqrt(var / R);
  }

  // digest: seed, then every record field in replication order
  uint64_t h = fnv64(&master_seed, sizeof(master_seed));
  h = fnv64(tab.sel.data(), tab.sel.size(), h);
  h = fnv64(tab.reason.data(), tab.reason.size(), h);
  h = fnv64(tab.n_ind.data(), tab.n_ind.size() * sizeof(int32_t), h);
  h = fnv64(tab.total_n.data(), tab.total_n.size() * sizeof(int64_t), h);
  oc.digest = h;
  return oc;
}

}  // namespace

uint64_t replication_seed(uint64_t master_seed, long rep) {
  SplitMix64 a(master_seed);
  SplitMix64 b(a.next() ^ static_cast<uint64_t>(rep));
  return b.next();
}

OperatingCharacteristics simulate(const DesignConfig& cfg, const ScenarioSpec& sc,
                                  long n_reps, uint64_t master_seed,
                                  int n_threads) {
  if (n_reps < 1) throw ConfigError("simulate needs n_reps >= 1");
  PreparedDesign prep(cfg, sc);
  RepTable tab(n_reps, sc.k());
  int nt = n_threads > 0 ? n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
  for (long r = 0; r < n_reps; ++r) {
    TrialResult t = run_trial(prep, replication_seed(master_seed, r));
    tab.record(r, t);
  }
  return aggregate(cfg, sc, tab, master_seed);
}

OperatingCharacteristics simulate_serial(const DesignConfig& cfg,
                                         const ScenarioSpec& sc, long n_reps,
                                         uint64_t master_seed) {
  if (n_reps < 1) throw ConfigError("simulate needs n_reps >= 1");
  PreparedDesign prep(cfg, sc);
  RepTable tab(n_reps, sc.k());
  for (long r = 0; r < n_reps; ++r) {
    TrialResult t = run_trial(prep, replication_seed(master_seed, r));
    tab.record(r, t);
  }
  return aggregate(cfg, sc, tab, master_seed);
}

double csp_percent(const std::vector<IndicationOC>& per_indication,
                   const ScenarioSpec& sc) {
  if (static_cast<int>(per_indication.size()) != sc.k())
    throw ConfigError("csp: indication count mismatch");
  double sum = 0;
  long cnt = 0;
  for (int j = 0; j < sc.k(); ++j) {
    Selection t = sc.indications[j].true_obd;
    if (t == Selection::none) continue;
    sum += t == Selection::high ? per_indication[j].pct_high
                                : per_indication[j].pct_low;
    ++cnt;
  }
  if (cnt == 0)
    throw NoTruthDefined("csp undefined: no indication has a true OBD");
  return sum / cnt;
}

}  // namespace romi
