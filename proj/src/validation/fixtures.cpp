#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "romi/errors.hpp"
#include "romi/monitoring.hpp"
#include "romi/outcomes.hpp"
#include "romi/validation/fixtures.hpp"
#include "romi/validation/oracles.hpp"

namespace romi::fixtures {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kNMax = 81;

struct JointCase {
  double phi, pi_tox, pi_resp;
};

const JointCase kJointCases[] = {
    {0.25, 0.40, 0.25}, {0.25, 0.20, 0.45}, {0.25, 0.25, 0.50},
    {0.00, 0.30, 0.40}, {0.25, 0.20, 0.80}, {-0.20, 0.35, 0.45},
};

// Closed-form Gaussian-style association cells, written out independently of
// the production solver.
ordered_json joint_cells(const JointCase& c) {
  double sd = std::sqrt(c.pi_resp * (1.0 - c.pi_resp) * c.pi_tox * (1.0 - c.pi_tox));
  double p11 = c.pi_tox * c.pi_resp + c.phi * sd;
  ordered_json out;
  out["p11"] = p11;
  out["p10"] = c.pi_tox - p11;
  out["p01"] = c.pi_resp - p11;
  out["p00"] = 1.0 - c.pi_tox - c.pi_resp + p11;
  return out;
}

struct FnCase {
  int n;
  double pi;
  const char* cutoff_kind;  // "interim" or "final"
};

const FnCase kFnCases[] = {
    {10, 0.45, "interim"}, {14, 0.45, "interim"}, {14, 0.25, "interim"},
    {20, 0.45, "final"},   {27, 0.45, "interim"}, {41, 0.45, "interim"},
    {20, 0.25, "final"},
};

ordered_json limits_json(const MonitoringLimits& lim) {
  ordered_json j;
  j["tox_limit"] = lim.tox_limit;
  j["resp_floor"] = lim.resp_floor;
  j["c_tox"] = lim.c_tox;
  j["c_fut"] = lim.c_fut;
  j["c_fut_final"] = lim.c_fut_final;
  j["prior_a"] = lim.prior_a;
  j["prior_b"] = lim.prior_b;
  return j;
}

void write_file(const std::string& dir, const std::string& name, const ordered_json& j) {
  std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write fixture file: " + path);
  out << j.dump(2) << "\n";
}

json load_file(const std::string& dir, const std::string& name) {
  std::string path = dir + "/" + name;
  std::ifstream in(path);
  if (!in) throw ConfigError("missing fixture file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("fixture " + path + " is not valid JSON: " + e.what());
  }
  return j;
}

ordered_json grid_json(const oracle::GridPosterior& g, bool clustered, bool v2) {
  ordered_json j;
  j["q_high"] = g.q_high;
  j["q_low"] = g.q_low;
  if (clustered) j["pr_cluster_low"] = g.pr_cluster_low;
  if (v2) {
    j["beta_mean"] = g.beta_mean;
    j["pr_spike"] = g.pr_spike;
  }
  return j;
}

struct Comparer {
  std::vector<std::string> fails;

  void close(const std::string& what, double got, double want, double tol) {
    if (!(std::fabs(got - want) <= tol)) {
      char buf[192];
      std::snprintf(buf, sizeof buf, "%s: got %.12g want %.12g (tol %g)",
                    what.c_str(), got, want, tol);
      fails.emplace_back(buf);
    }
  }
  void equal(const std::string& what, long got, long want) {
    if (got != want) {
      fails.emplace_back(what + ": got " + std::to_string(got) + " want " +
                         std::to_string(want));
    }
  }
};

}  // namespace

std::vector<GoldenDataset> golden_datasets() {
  std::vector<GoldenDataset> v;
  v.push_back({"balanced", {12.0, 13.0, 20, 20, 8.4, 14, true}});
  v.push_back({"high-favored", {11.2, 10.4, 20, 20, 7.84, 14, true}});
  v.push_back({"low-stopped", {10.8, 3.6, 20, 10, 7.0, 14, true}});
  return v;
}

std::vector<std::string> fixture_files() {
  return {"boundaries.json", "posterior_k1.json", "fn_exact.json", "joint_cells.json"};
}

void generate_all(const std::string& dir) {
  MonitoringLimits lim;

  {
    ordered_json j;
    j["name"] = "stopping-boundaries";
    j["oracle"] = "beta-quadrature";
    j["provenance"] = "DERIVED";
    j["limits"] = limits_json(lim);
    j["n_max"] = kNMax;
    ordered_json tox = ordered_json::array(), fut = ordered_json::array(),
                 fut_final = ordered_json::array();
    for (int n = 0; n <= kNMax; ++n) {
      tox.push_back(oracle::tox_boundary(n, lim));
      fut.push_back(oracle::fut_boundary(n, lim, lim.c_fut));
      fut_final.push_back(oracle::fut_boundary(n, lim, lim.c_fut_final));
    }
    j["tox_min"] = tox;
    j["fut_max"] = fut;
    j["fut_final_max"] = fut_final;
    write_file(dir, "boundaries.json", j);
  }

  {
    ordered_json j;
    j["name"] = "posterior-k1";
    j["oracle"] = "grid-posterior";
    j["provenance"] = "DERIVED";
    ordered_json cases = ordered_json::array();
    for (const auto& g : golden_datasets()) {
      ordered_json c;
      c["dataset"] = g.name;
      ordered_json in;
      in["z_h"] = g.data.z_h;
      in["z_l"] = g.data.z_l;
      in["n_h"] = g.data.n_h;
      in["n_l"] = g.data.n_l;
      in["z_h1"] = g.data.z_h1;
      in["n_h1"] = g.data.n_h1;
      c["inputs"] = in;
      HierHyperparams hp;
      c["v1"] = grid_json(oracle::grid_posterior(oracle::GridModel::v1, g.data, hp),
                          true, false);
      c["nc"] = grid_json(oracle::grid_posterior(oracle::GridModel::nc, g.data, hp),
                          false, false);
      c["v2"] = grid_json(oracle::grid_posterior(oracle::GridModel::v2, g.data, hp),
                          true, true);
      cases.push_back(c);
    }
    j["cases"] = cases;
    write_file(dir, "posterior_k1.json", j);
  }

  {
    ordered_json j;
    j["name"] = "futility-false-negatives";
    j["oracle"] = "closed-form";
    j["provenance"] = "DERIVED";
    j["limits"] = limits_json(lim);
    ordered_json cases = ordered_json::array();
    for (const auto& f : kFnCases) {
      double cutoff = std::string(f.cutoff_kind) == "final" ? lim.c_fut_final : lim.c_fut;
      ordered_json c;
      c["n"] = f.n;
      c["pi_true"] = f.pi;
      c["cutoff"] = f.cutoff_kind;
      c["stop_prob"] = oracle::fn_prob_exact(f.n, f.pi, lim, cutoff);
      cases.push_back(c);
    }
    j["cases"] = cases;
    write_file(dir, "fn_exact.json", j);
  }

  {
    ordered_json j;
    j["name"] = "joint-outcome-cells";
    j["oracle"] = "closed-form";
    j["provenance"] = "DERIVED";
    ordered_json cases = ordered_json::array();
    for (const auto& c : kJointCases) {
      ordered_json e;
      e["phi"] = c.phi;
      e["pi_tox"] = c.pi_tox;
      e["pi_resp"] = c.pi_resp;
      e["cells"] = joint_cells(c);
      cases.push_back(e);
    }
    j["cases"] = cases;
    write_file(dir, "joint_cells.json", j);
  }
}

std::vector<std::string> check_all(const std::string& dir) {
  Comparer cmp;
  MonitoringLimits lim;

  try {
    json j = load_file(dir, "boundaries.json");
    int n_max = j.at("n_max").get<int>();
    const auto& tox = j.at("tox_min");
    const auto& fut = j.at("fut_max");
    const auto& fut_final = j.at("fut_final_max");
    StoppingBoundaries prod(lim, n_max);
    for (int n = 0; n <= n_max; ++n) {
      auto tag = [&](const char* k) {
        return std::string("boundaries.json ") + k + " at n=" + std::to_string(n);
      };
      cmp.equal(tag("tox_min[oracle]"), oracle::tox_boundary(n, lim),
                tox.at(n).get<long>());
      cmp.equal(tag("fut_max[oracle]"), oracle::fut_boundary(n, lim, lim.c_fut),
                fut.at(n).get<long>());
      cmp.equal(tag("fut_final_max[oracle]"),
                oracle::fut_boundary(n, lim, lim.c_fut_final),
                fut_final.at(n).get<long>());
      cmp.equal(tag("tox_min[production]"), prod.tox_boundary(n), tox.at(n).get<long>());
      cmp.equal(tag("fut_max[production]"), prod.fut_boundary(n), fut.at(n).get<long>());
      cmp.equal(tag("fut_final_max[production]"), prod.fut_boundary_final(n),
                fut_final.at(n).get<long>());
    }
  } catch (const std::exception& e) {
    cmp.fails.emplace_back(std::string("boundaries.json: ") + e.what());
  }

  try {
    json j = load_file(dir, "posterior_k1.json");
    auto golden = golden_datasets();
    const auto& cases = j.at("cases");
    if (cases.size() != golden.size()) {
      cmp.fails.emplace_back("posterior_k1.json: case count mismatch");
    }
    for (size_t i = 0; i < cases.size() && i < golden.size(); ++i) {
      const auto& c = cases.at(i);
      HierHyperparams hp;
      auto check_model = [&](const char* key, oracle::GridModel m) {
        auto g = oracle::grid_posterior(m, golden[i].data, hp);
        std::string base = "posterior_k1.json " + golden[i].name + " " + key;
        cmp.close(base + " q_high", g.q_high, c.at(key).at("q_high").get<double>(), 1e-9);
        cmp.close(base + " q_low", g.q_low, c.at(key).at("q_low").get<double>(), 1e-9);
      };
      check_model("v1", oracle::GridModel::v1);
      check_model("nc", oracle::GridModel::nc);
      check_model("v2", oracle::GridModel::v2);
    }
  } catch (const std::exception& e) {
    cmp.fails.emplace_back(std::string("posterior_k1.json: ") + e.what());
  }

  try {
    json j = load_file(dir, "fn_exact.json");
    for (const auto& c : j.at("cases")) {
      int n = c.at("n").get<int>();
      double pi = c.at("pi_true").get<double>();
      double cutoff = c.at("cutoff").get<std::string>() == "final" ? lim.c_fut_final
                                                                   : lim.c_fut;
      double want = c.at("stop_prob").get<double>();
      std::string base = "fn_exact.json n=" + std::to_string(n);
      cmp.close(base + " [oracle]", oracle::fn_prob_exact(n, pi, lim, cutoff), want, 1e-10);
      cmp.close(base + " [production]", false_negative_prob(n, pi, lim, cutoff), want,
                1e-10);
    }
  } catch (const std::exception& e) {
    cmp.fails.emplace_back(std::string("fn_exact.json: ") + e.what());
  }

  try {
    json j = load_file(dir, "joint_cells.json");
    for (const auto& c : j.at("cases")) {
      double phi = c.at("phi").get<double>();
      double pt = c.at("pi_tox").get<double>();
      double pr = c.at("pi_resp").get<double>();
      JointOutcomeProb cells = solve_joint(pt, pr, phi);
      const auto& want = c.at("cells");
      char base[96];
      std::snprintf(base, sizeof base, "joint_cells.json (phi=%g, pt=%g, pr=%g)", phi,
                    pt, pr);
      cmp.close(std::string(base) + " p11", cells.p11, want.at("p11").get<double>(), 1e-12);
      cmp.close(std::string(base) + " p10", cells.p10, want.at("p10").get<double>(), 1e-12);
      cmp.close(std::string(base) + " p01", cells.p01, want.at("p01").get<double>(), 1e-12);
      cmp.close(std::string(base) + " p00", cells.p00, want.at("p00").get<double>(), 1e-12);
      cmp.close(std::string(base) + " phi round-trip", cells.phi(), phi, 1e-12);
    }
  } catch (const std::exception& e) {
    cmp.fails.emplace_back(std::string("joint_cells.json: ") + e.what());
  }

  return cmp.fails;
}

}  // namespace romi::fixtures
