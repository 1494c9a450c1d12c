#include "romi/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "romi/errors.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

namespace romi {

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double num_or(const json& j, const char* key, double dflt, const std::string& where) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number())
    throw ConfigError(std::string("key \"") + key + "\" in " + where + " must be a number");
  return j[key].get<double>();
}

long int_or(const json& j, const char* key, long dflt, const std::string& where) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer())
    throw ConfigError(std::string("key \"") + key + "\" in " + where + " must be an integer");
  return j[key].get<long>();
}

double req_num(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw ConfigError(std::string("missing key \"") + key + "\" in " + where);
  if (!j[key].is_number())
    throw ConfigError(std::string("key \"") + key + "\" in " + where + " must be a number");
  return j[key].get<double>();
}

Selection parse_selection(const std::string& s, const std::string& where) {
  if (s == "high") return Selection::high;
  if (s == "low") return Selection::low;
  if (s == "none") return Selection::none;
  throw ConfigError("true_obd in " + where + " must be high|low|none, got \"" + s + "\"");
}

ScenarioSpec parse_scenario(const json& j, const std::string& where) {
  check_keys(j, {"name", "phi", "indications"}, where);
  ScenarioSpec sc;
  sc.name = j.value("name", std::string{});
  sc.phi = num_or(j, "phi", 0.25, where);
  if (!j.contains("indications") || !j["indications"].is_array() ||
      j["indications"].empty())
    throw ConfigError(where + " needs a non-empty \"indications\" array");
  int idx = 0;
  for (const auto& ji : j["indications"]) {
    std::string iw = where + ".indications[" + std::to_string(idx) + "]";
    check_keys(ji, {"name", "high", "low", "true_obd", "drift"}, iw);
    IndicationScenario ind;
    ind.name = ji.value("name", std::to_string(idx + 1));
    for (const char* dose : {"high", "low"}) {
      if (!ji.contains(dose))
        throw ConfigError("missing key \"" + std::string(dose) + "\" in " + iw);
      const auto& jd = ji[dose];
      std::string dw = iw + "." + dose;
      check_keys(jd, {"tox", "resp"}, dw);
      double tox = req_num(jd, "tox", dw);
      double resp = req_num(jd, "resp", dw);
      if (std::string(dose) == "high") {
        ind.tox_high = tox;
        ind.resp_high = resp;
      } else {
        ind.tox_low = tox;
        ind.resp_low = resp;
      }
    }
    if (ji.contains("true_obd"))
      ind.true_obd = parse_selection(ji["true_obd"].get<std::string>(), iw);
    ind.drift = num_or(ji, "drift", 0.0, iw);
    sc.indications.push_back(ind);
    ++idx;
  }
  sc.validate();
  return sc;
}

MonitoringLimits parse_limits(const json& j, const std::string& where) {
  check_keys(j,
             {"tox_limit", "resp_floor", "c_tox", "c_fut", "c_fut_final",
              "prior_a", "prior_b"},
             where);
  MonitoringLimits lim;
  lim.tox_limit = num_or(j, "tox_limit", lim.tox_limit, where);
  lim.resp_floor = num_or(j, "resp_floor", lim.resp_floor, where);
  lim.c_tox = num_or(j, "c_tox", lim.c_tox, where);
  lim.c_fut = num_or(j, "c_fut", lim.c_fut, where);
  lim.c_fut_final = num_or(j, "c_fut_final", lim.c_fut_final, where);
  lim.prior_a = num_or(j, "prior_a", lim.prior_a, where);
  lim.prior_b = num_or(j, "prior_b", lim.prior_b, where);
  lim.validate();
  return lim;
}

UtilityTable parse_utilities(const json& j, const std::string& where) {
  check_keys(j, {"u01", "u00", "u11", "u10"}, where);
  UtilityTable u;
  u.u01 = num_or(j, "u01", u.u01, where);
  u.u00 = num_or(j, "u00", u.u00, where);
  u.u11 = num_or(j, "u11", u.u11, where);
  u.u10 = num_or(j, "u10", u.u10, where);
  u.validate();
  return u;
}

HierHyperparams parse_hyper(const json& j, const std::string& where) {
  check_keys(j,
             {"mu0_center", "mu1_center", "mu0_sd", "mu1_sd", "tau_prior",
              "tau_ig_shape", "tau_ig_rate", "tau_hc_scale", "qh_a", "qh_b",
              "q_a", "q_b", "spike_var", "slab_var", "nc_mu_center", "nc_mu_sd"},
             where);
  HierHyperparams hp;
  hp.mu0_center = num_or(j, "mu0_center", hp.mu0_center, where);
  hp.mu1_center = num_or(j, "mu1_center", hp.mu1_center, where);
  hp.mu0_sd = num_or(j, "mu0_sd", hp.mu0_sd, where);
  hp.mu1_sd = num_or(j, "mu1_sd", hp.mu1_sd, where);
  if (j.contains("tau_prior")) {
    std::string t = j["tau_prior"].get<std::string>();
    if (t == "inverse-gamma")
      hp.tau_prior = TauPrior::inverse_gamma;
    else if (t == "half-cauchy")
      hp.tau_prior = TauPrior::half_cauchy;
    else
      throw ConfigError("tau_prior in " + where + " must be inverse-gamma|half-cauchy");
  }
  hp.tau_ig_shape = num_or(j, "tau_ig_shape", hp.tau_ig_shape, where);
  hp.tau_ig_rate = num_or(j, "tau_ig_rate", hp.tau_ig_rate, where);
  hp.tau_hc_scale = num_or(j, "tau_hc_scale", hp.tau_hc_scale, where);
  hp.qh_a = num_or(j, "qh_a", hp.qh_a, where);
  hp.qh_b = num_or(j, "qh_b", hp.qh_b, where);
  hp.q_a = num_or(j, "q_a", hp.q_a, where);
  hp.q_b = num_or(j, "q_b", hp.q_b, where);
  hp.spike_var = num_or(j, "spike_var", hp.spike_var, where);
  hp.slab_var = num_or(j, "slab_var", hp.slab_var, where);
  hp.nc_mu_center = num_or(j, "nc_mu_center", hp.nc_mu_center, where);
  hp.nc_mu_sd = num_or(j, "nc_mu_sd", hp.nc_mu_sd, where);
  hp.validate();
  return hp;
}

McmcConfig parse_mcmc(const json& j, const std::string& where) {
  check_keys(j, {"n_iter", "n_burn", "thin", "init_step", "target_accept", "seed"},
             where);
  McmcConfig mc;
  mc.n_iter = int_or(j, "n_iter", mc.n_iter, where);
  mc.n_burn = int_or(j, "n_burn", mc.n_burn, where);
  mc.thin = int_or(j, "thin", mc.thin, where);
  mc.init_step = num_or(j, "init_step", mc.init_step, where);
  mc.target_accept = num_or(j, "target_accept", mc.target_accept, where);
  mc.seed = static_cast<uint64_t>(int_or(j, "seed", static_cast<long>(mc.seed), where));
  mc.validate();
  return mc;
}

OutcomeCounts parse_counts(const json& j, const std::string& where) {
  check_keys(j, {"x01", "x00", "x11", "x10"}, where);
  OutcomeCounts c;
  c.x01 = int_or(j, "x01", 0, where);
  c.x00 = int_or(j, "x00", 0, where);
  c.x11 = int_or(j, "x11", 0, where);
  c.x10 = int_or(j, "x10", 0, where);
  if (c.x01 < 0 || c.x00 < 0 || c.x11 < 0 || c.x10 < 0)
    throw ConfigError("negative outcome count in " + where);
  return c;
}

}  // namespace

DesignKind parse_design_kind(const std::string& s) {
  if (s == "pool") return DesignKind::pool;
  if (s == "independent") return DesignKind::independent;
  if (s == "romi-v1-nc") return DesignKind::romi_v1_nc;
  if (s == "romi-v1") return DesignKind::romi_v1;
  if (s == "romi-v2") return DesignKind::romi_v2;
  throw ConfigError(
      "unknown design \"" + s +
      "\" (expected pool|independent|romi-v1-nc|romi-v1|romi-v2)");
}

const char* design_kind_id(DesignKind k) {
  switch (k) {
    case DesignKind::pool: return "pool";
    case DesignKind::independent: return "independent";
    case DesignKind::romi_v1_nc: return "romi-v1-nc";
    case DesignKind::romi_v1: return "romi-v1";
    case DesignKind::romi_v2: return "romi-v2";
  }
  return "?";
}

ScenarioSpec parse_scenario_json(const std::string& text, const std::string& where) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("invalid JSON in " + where + ": " + e.what());
  }
  return parse_scenario(j, where);
}

ScenarioSpec load_scenario(const std::string& path) {
  return parse_scenario(load_json_file(path), path);
}

RunConfig load_run_config(const std::string& path) {
  json j = load_json_file(path);
  const std::string where = path;
  check_keys(j,
             {"scenario", "designs", "reps", "seed", "threads", "out_dir",
              "format", "trial", "hyper", "mcmc"},
             where);
  RunConfig rc;

  if (!j.contains("scenario"))
    throw ConfigError("missing key \"scenario\" in " + where);
  auto add_scenario = [&](const json& js, const std::string& sw) {
    if (js.is_string()) {
      std::filesystem::path sp = js.get<std::string>();
      if (sp.is_relative()) sp = std::filesystem::path(path).parent_path() / sp;
      rc.scenarios.push_back(load_scenario(sp.string()));
    } else {
      rc.scenarios.push_back(parse_scenario(js, sw));
    }
  };
  if (j["scenario"].is_array()) {
    if (j["scenario"].empty())
      throw ConfigError("\"scenario\" list in " + where + " is empty");
    int i = 0;
    for (const auto& js : j["scenario"])
      add_scenario(js, where + ".scenario[" + std::to_string(i++) + "]");
  } else {
    add_scenario(j["scenario"], where + ".scenario");
  }
  for (const auto& sc : rc.scenarios) {
    if (sc.k() != rc.scenarios.front().k())
      throw ConfigError("scenarios in " + where + " disagree on indication count");
  }

  if (!j.contains("designs") || !j["designs"].is_array() || j["designs"].empty())
    throw ConfigError(where + " needs a non-empty \"designs\" array");
  for (const auto& d : j["designs"])
    rc.designs.push_back(parse_design_kind(d.get<std::string>()));

  rc.n_reps = int_or(j, "reps", rc.n_reps, where);
  if (rc.n_reps < 1) throw ConfigError("\"reps\" in " + where + " must be >= 1");
  rc.seed = static_cast<uint64_t>(int_or(j, "seed", static_cast<long>(rc.seed), where));
  rc.threads = static_cast<int>(int_or(j, "threads", rc.threads, where));
  rc.out_dir = j.value("out_dir", rc.out_dir);
  rc.format = j.value("format", rc.format);
  if (rc.format != "csv" && rc.format != "markdown" && rc.format != "both")
    throw ConfigError("\"format\" in " + where + " must be csv|markdown|both");

  DesignConfig& b = rc.base;
  b.n_indications = rc.scenarios.front().k();
  if (j.contains("trial")) {
    const auto& jt = j["trial"];
    const std::string tw = where + ".trial";
    check_keys(jt,
               {"stage1_n", "stage2_n_per_dose", "indep_n_per_dose", "pool_total",
                "limits", "utilities"},
               tw);
    b.stage1_n = static_cast<int>(int_or(jt, "stage1_n", b.stage1_n, tw));
    b.stage2_n_per_dose =
        static_cast<int>(int_or(jt, "stage2_n_per_dose", b.stage2_n_per_dose, tw));
    b.indep_n_per_dose =
        static_cast<int>(int_or(jt, "indep_n_per_dose", b.indep_n_per_dose, tw));
    b.pool_total = int_or(jt, "pool_total", b.pool_total, tw);
    if (jt.contains("limits")) {
      b.limits.clear();
      if (jt["limits"].is_array()) {
        int i = 0;
        for (const auto& jl : jt["limits"])
          b.limits.push_back(parse_limits(jl, tw + ".limits[" + std::to_string(i++) + "]"));
      } else {
        b.limits.push_back(parse_limits(jt["limits"], tw + ".limits"));
      }
    }
    if (jt.contains("utilities")) {
      b.utilities.clear();
      if (jt["utilities"].is_array()) {
        int i = 0;
        for (const auto& ju : jt["utilities"])
          b.utilities.push_back(
              parse_utilities(ju, tw + ".utilities[" + std::to_string(i++) + "]"));
      } else {
        b.utilities.push_back(parse_utilities(jt["utilities"], tw + ".utilities"));
      }
    }
  }
  if (j.contains("hyper")) b.hyper = parse_hyper(j["hyper"], where + ".hyper");
  if (j.contains("mcmc")) b.mcmc = parse_mcmc(j["mcmc"], where + ".mcmc");
  return rc;
}

std::string canonical_run_json(const RunConfig& rc) {
  ordered_json j;
  auto& js = j["scenario"] = ordered_json::array();
  for (const auto& sc : rc.scenarios) {
    ordered_json jsc;
    jsc["name"] = sc.name;
    jsc["phi"] = sc.phi;
    auto& ja = jsc["indications"] = ordered_json::array();
    for (const auto& ind : sc.indications) {
      ordered_json ji;
      ji["name"] = ind.name;
      ji["high"] = {{"tox", ind.tox_high}, {"resp", ind.resp_high}};
      ji["low"] = {{"tox", ind.tox_low}, {"resp", ind.resp_low}};
      ji["true_obd"] = to_string(ind.true_obd);
      ji["drift"] = ind.drift;
      ja.push_back(ji);
    }
    js.push_back(jsc);
  }
  auto& jd = j["designs"] = ordered_json::array();
  for (DesignKind k : rc.designs) jd.push_back(design_kind_id(k));
  j["reps"] = rc.n_reps;
  j["seed"] = rc.seed;
  j["threads"] = rc.threads;
  j["format"] = rc.format;
  const DesignConfig& b = rc.base;
  j["trial"]["stage1_n"] = b.stage1_n;
  j["trial"]["stage2_n_per_dose"] = b.stage2_n_per_dose;
  j["trial"]["indep_n_per_dose"] = b.indep_n_per_dose;
  j["trial"]["pool_total"] = b.pool_total;
  auto& jl = j["trial"]["limits"] = ordered_json::array();
  for (const auto& l : b.limits)
    jl.push_back({{"tox_limit", l.tox_limit},
                  {"resp_floor", l.resp_floor},
                  {"c_tox", l.c_tox},
                  {"c_fut", l.c_fut},
                  {"c_fut_final", l.c_fut_final},
                  {"prior_a", l.prior_a},
                  {"prior_b", l.prior_b}});
  auto& ju = j["trial"]["utilities"] = ordered_json::array();
  for (const auto& u : b.utilities)
    ju.push_back({{"u01", u.u01}, {"u00", u.u00}, {"u11", u.u11}, {"u10", u.u10}});
  const HierHyperparams& hp = b.hyper;
  j["hyper"] = {{"mu0_center", hp.mu0_center},
                {"mu1_center", hp.mu1_center},
                {"mu0_sd", hp.mu0_sd},
                {"mu1_sd", hp.mu1_sd},
                {"tau_prior",
                 hp.tau_prior == TauPrior::inverse_gamma ? "inverse-gamma"
                                                         : "half-cauchy"},
                {"tau_ig_shape", hp.tau_ig_shape},
                {"tau_ig_rate", hp.tau_ig_rate},
                {"tau_hc_scale", hp.tau_hc_scale},
                {"qh_a", hp.qh_a},
                {"qh_b", hp.qh_b},
                {"q_a", hp.q_a},
                {"q_b", hp.q_b},
                {"spike_var", hp.spike_var},
                {"slab_var", hp.slab_var},
                {"nc_mu_center", hp.nc_mu_center},
                {"nc_mu_sd", hp.nc_mu_sd}};
  const McmcConfig& mc = b.mcmc;
  j["mcmc"] = {{"n_iter", mc.n_iter},
               {"n_burn", mc.n_burn},
               {"thin", mc.thin},
               {"init_step", mc.init_step},
               {"target_accept", mc.target_accept},
               {"seed", mc.seed}};
  return j.dump(2);
}

ObservedCounts load_observed_counts(const std::string& path) {
  json j = load_json_file(path);
  const std::string where = path;
  check_keys(j, {"stage", "indications"}, where);
  ObservedCounts oc;
  if (!j.contains("stage"))
    throw ConfigError("missing key \"stage\" in " + where);
  oc.stage = j["stage"].get<std::string>();
  if (oc.stage != "stage1" && oc.stage != "interim" && oc.stage != "final")
    throw ConfigError("\"stage\" in " + where + " must be stage1|interim|final");
  if (!j.contains("indications") || !j["indications"].is_array() ||
      j["indications"].empty())
    throw ConfigError(where + " needs a non-empty \"indications\" array");
  int idx = 0;
  for (const auto& ji : j["indications"]) {
    std::string iw = where + ".indications[" + std::to_string(idx) + "]";
    check_keys(ji, {"name", "high", "low", "dropped_stage1"}, iw);
    ObservedIndication ind;
    ind.name = ji.value("name", std::to_string(idx + 1));
    ind.dropped_stage1 = ji.value("dropped_stage1", false);
    for (const char* dose : {"high", "low"}) {
      if (!ji.contains(dose)) continue;
      const auto& jd = ji[dose];
      std::string dw = iw + "." + dose;
      check_keys(jd, {"stage1", "stage2", "stopped"}, dw);
      ObservedDose& od = std::string(dose) == "high" ? ind.high : ind.low;
      if (jd.contains("stage1")) od.stage1 = parse_counts(jd["stage1"], dw + ".stage1");
      if (jd.contains("stage2")) od.stage2 = parse_counts(jd["stage2"], dw + ".stage2");
      od.stopped = jd.value("stopped", false);
    }
    oc.indications.push_back(ind);
    ++idx;
  }
  return oc;
}

}  // namespace romi
