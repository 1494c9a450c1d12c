#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "romi/errors.hpp"
#include "romi/outcomes.hpp"
#include "romi/scenario.hpp"

using namespace romi;

TEST_CASE("mean utility depends on the margins only") {
  UtilityTable u;  // additive 100/40/60/0 table
  for (double phi : {-0.2, 0.0, 0.25, 0.5}) {
    CHECK(mean_utility(u, solve_joint(0.25, 0.40, phi)) == doctest::Approx(54.0));
    CHECK(mean_utility(u, solve_joint(0.15, 0.40, phi)) == doctest::Approx(58.0));
    CHECK(mean_utility(u, solve_joint(0.20, 0.40, phi)) == doctest::Approx(56.0));
  }
  CHECK(quasi_prob(u, solve_joint(0.25, 0.40, 0.25)) == doctest::Approx(0.54));
}

TEST_CASE("a non-additive table feels the association") {
  UtilityTable u;
  u.u11 = 30.0;  // toxicity now costs more under response
  CHECK_FALSE(u.additive());
  double m0 = mean_utility(u, solve_joint(0.25, 0.40, 0.0));
  double m1 = mean_utility(u, solve_joint(0.25, 0.40, 0.5));
  CHECK(m0 != doctest::Approx(m1));
  UtilityTable v;
  CHECK(v.additive());
}

TEST_CASE("solve_joint reproduces margins and association") {
  int tested = 0;
  for (double pt : {0.05, 0.25, 0.40})
    for (double pr : {0.05, 0.30, 0.70})
      for (double phi : {-0.1, 0.0, 0.25}) {
        JointOutcomeProb p;
        try {
          p = solve_joint(pt, pr, phi);
        } catch (const InfeasibleAssociation&) {
          continue;  // e.g. negative phi at matched small margins
        }
        ++tested;
        p.validate();
        CHECK(p.pi_tox() == doctest::Approx(pt).epsilon(1e-12));
        CHECK(p.pi_resp() == doctest::Approx(pr).epsilon(1e-12));
        CHECK(p.phi() == doctest::Approx(phi).epsilon(1e-9));
      }
  CHECK(tested >= 24);
  // independence case
  JointOutcomeProb ind = solve_joint(0.3, 0.6, 0.0);
  CHECK(ind.p11 == doctest::Approx(0.18));
}

TEST_CASE("solve_joint rejects impossible inputs") {
  CHECK_THROWS_AS(solve_joint(0.05, 0.50, 0.90), InfeasibleAssociation);
  CHECK_THROWS_AS(solve_joint(-0.1, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(solve_joint(0.5, 1.2, 0.0), DomainError);
  CHECK_THROWS_AS(solve_joint(0.5, 0.5, 1.5), DomainError);
}

TEST_CASE("utility table invariants") {
  UtilityTable u;
  CHECK_NOTHROW(u.validate());
  u.u01 = 90.0;
  CHECK_THROWS_AS(u.validate(), ConfigError);
  u = UtilityTable{};
  u.u10 = 5.0;
  CHECK_THROWS_AS(u.validate(), ConfigError);
  u = UtilityTable{};
  u.u00 = 130.0;
  CHECK_THROWS_AS(u.validate(), ConfigError);
  u = UtilityTable{};
  u.u00 = 70.0;
  u.u11 = 60.0;  // u11 < u00 is fine: ordering ties only to anchors
  CHECK_NOTHROW(u.validate());
}

TEST_CASE("counts accumulate and classify cells") {
  OutcomeCounts x;
  x.add({false, true});   // x01
  x.add({false, false});  // x00
  x.add({true, true});    // x11
  x.add({true, false});   // x10
  x.add({true, false});
  CHECK(x.total() == 5);
  CHECK(x.tox() == 3);
  CHECK(x.resp() == 2);
  OutcomeCounts y = x + x;
  CHECK(y.total() == 10);
  CHECK(y.x10 == 4);
}

TEST_CASE("quasi-events weigh counts by the utility table") {
  UtilityTable u;
  OutcomeCounts x;
  x.x01 = 2;
  x.x00 = 3;
  x.x11 = 1;
  x.x10 = 4;
  CHECK(quasi_events(u, x) == doctest::Approx((2 * 100 + 3 * 40 + 1 * 60) / 100.0));
  CHECK(quasi_events(u, OutcomeCounts{}) == 0.0);
}

TEST_CASE("sample_outcome consumes exactly two uniforms") {
  JointOutcomeProb p = solve_joint(0.25, 0.40, 0.25);
  RngStream a = RngStream::derive(7, 1);
  RngStream b = RngStream::derive(7, 1);
  sample_outcome(p, a);
  b.uniform();
  b.uniform();
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("sample_outcome frequencies match the cells") {
  JointOutcomeProb p = solve_joint(0.25, 0.40, 0.25);
  RngStream r(90125);
  const int n = 200000;
  OutcomeCounts x;
  for (int i = 0; i < n; ++i) x.add(sample_outcome(p, r));
  double tol = 4.0 * 0.5 / std::sqrt(static_cast<double>(n));  // >= 4 binomial SEs
  CHECK(std::abs(static_cast<double>(x.x11) / n - p.p11) < tol);
  CHECK(std::abs(static_cast<double>(x.x00) / n - p.p00) < tol);
  CHECK(std::abs(static_cast<double>(x.tox()) / n - 0.25) < tol);
  CHECK(std::abs(static_cast<double>(x.resp()) / n - 0.40) < tol);
}

TEST_CASE("drift shifts only the stage-2 high-dose response margin") {
  ScenarioSpec sc;
  sc.name = "drifted";
  sc.phi = 0.25;
  sc.indications.push_back(
      {"i1", 0.25, 0.40, 0.15, 0.40, Selection::low, -0.10});
  sc.validate();
  CHECK(effective_joint(sc, 0, Dose::high, Stage::one).pi_resp() ==
        doctest::Approx(0.40));
  CHECK(effective_joint(sc, 0, Dose::high, Stage::two).pi_resp() ==
        doctest::Approx(0.30));
  CHECK(effective_joint(sc, 0, Dose::high, Stage::two).pi_tox() ==
        doctest::Approx(0.25));
  CHECK(effective_joint(sc, 0, Dose::low, Stage::two).pi_resp() ==
        doctest::Approx(0.40));
}

TEST_CASE("scenario validation rejects bad probabilities and infeasible joints") {
  ScenarioSpec sc;
  sc.indications.push_back({"i1", 1.2, 0.4, 0.1, 0.3, Selection::none, 0.0});
  CHECK_THROWS_AS(sc.validate(), ConfigError);
  sc.indications[0] = {"i1", 0.05, 0.50, 0.1, 0.3, Selection::none, 0.0};
  sc.phi = 0.90;
  CHECK_THROWS_AS(sc.validate(), InfeasibleAssociation);
  // drift pushing a margin out of range
  sc.phi = 0.25;
  sc.indications[0] = {"i1", 0.25, 0.05, 0.1, 0.3, Selection::none, -0.10};
  CHECK_THROWS_AS(sc.validate(), ConfigError);
}
