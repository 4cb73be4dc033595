#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "doctest.h"
#include "nlfb/classify.hpp"
#include "nlfb/model.hpp"
#include "nlfb/simulate.hpp"

using namespace nlfb;

namespace {

constexpr double kPi = 3.14159265358979323846;

SimConfig scalar_cfg(double a0, double h0, double amp, double mu,
                     double t_max) {
  SimConfig cfg;
  ScalarSpec sc;
  sc.boundary = Boundary::dirichlet;
  sc.kernel = Kernel::laplace(1.0);
  sc.d = 1.0;
  sc.mu = mu;
  sc.reaction = Reaction::logistic(a0, a0);
  cfg.model = sc;
  cfg.init.h0 = h0;
  cfg.init.u1.preset = InitialProfile::Preset::cosine_bump;
  cfg.init.u1.amplitude = amp;
  cfg.t_max = t_max;
  return cfg;
}

SimConfig pair_cfg(double mu, double t_max) {
  SimConfig cfg;
  PredPreySpec pp;
  pp.d1 = 1.0;
  pp.d2 = 1.0;
  pp.a1 = 0.3;
  pp.b1 = 1.0;
  pp.c1 = 0.25;
  pp.a2 = 0.25;
  pp.b2 = 1.0;
  pp.c2 = 0.25;
  pp.mu1 = mu;
  pp.mu2 = mu;
  cfg.model = pp;
  cfg.init.h0 = 0.5;
  cfg.init.u1.preset = InitialProfile::Preset::cosine_bump;
  cfg.init.u1.amplitude = 0.2;
  InitialProfile p2;
  p2.preset = InitialProfile::Preset::cosine_bump;
  p2.amplitude = 0.1;
  cfg.init.u2 = p2;
  cfg.t_max = t_max;
  return cfg;
}

}  // namespace

TEST_CASE("growth certificate classifies spreading without simulating") {
  SimConfig cfg = scalar_cfg(0.6, 1.0, 0.5, 1.0, 50.0);
  std::get<ScalarSpec>(cfg.model).boundary = Boundary::neumann;
  std::get<ScalarSpec>(cfg.model).reaction = Reaction::logistic(0.6, 1.0);

  const Outcome out = classify(cfg);
  CHECK(out.verdict == "spreading");
  CHECK(!out.simulated);
  CHECK(out.threshold == 0.0);
  CHECK(out.terminal_h == 1.0);
  CHECK(out.lambda_at_terminal > 0.0);
  CHECK(out.evidence.find(">=") != std::string::npos);
}

TEST_CASE("a front at the certifying length spreads without simulating") {
  const Outcome out = classify(scalar_cfg(0.5, 2.0, 0.5, 1.0, 50.0));
  CHECK(out.verdict == "spreading");
  CHECK(!out.simulated);
  CHECK(out.threshold == doctest::Approx(kPi / 2.0).epsilon(1e-4));
  CHECK(out.terminal_h == 2.0);
  CHECK(out.lambda_at_terminal > 0.0);
}

TEST_CASE("simulation confirms spreading once the front crosses") {
  const Outcome out = classify(scalar_cfg(0.5, 1.0, 0.5, 5.0, 40.0));
  CHECK(out.verdict == "spreading");
  CHECK(out.simulated);
  CHECK(out.terminal_h >= out.threshold);
  CHECK(out.lambda_at_terminal > 0.0);

  // A doubled budget must not flip the verdict or move the crossing point.
  const Outcome wide = classify(scalar_cfg(0.5, 1.0, 0.5, 5.0, 80.0));
  CHECK(wide.verdict == "spreading");
  CHECK(wide.terminal_h == doctest::Approx(out.terminal_h).epsilon(5e-3));
}

TEST_CASE("simulation certifies vanishing of small data under weak flow") {
  const Outcome out = classify(scalar_cfg(0.5, 1.0, 0.5, 1e-3, 200.0));
  CHECK(out.verdict == "vanishing");
  CHECK(out.simulated);
  CHECK(out.terminal_sup < 1e-8);
  CHECK(out.terminal_h < out.threshold);
  CHECK(out.lambda_at_terminal < 0.0);
  CHECK(out.evidence.find("sup") != std::string::npos);

  const Outcome wide = classify(scalar_cfg(0.5, 1.0, 0.5, 1e-3, 400.0));
  CHECK(wide.verdict == "vanishing");
}

TEST_CASE("undecided runs report the exhausted budget") {
  const Outcome out = classify(scalar_cfg(0.5, 1.0, 0.5, 1.0, 3.0));
  CHECK(out.verdict == "undecided");
  CHECK(out.simulated);
  CHECK(out.evidence.find("budget") != std::string::npos);
  CHECK(out.terminal_h < out.threshold);
}

TEST_CASE("critical flow strength brackets the spreading transition") {
  const SimConfig cfg = scalar_cfg(0.5, 1.0, 0.5, 1.0, 20000.0);
  const CriticalMu r = critical_mu(cfg, 0.05);

  CHECK(r.mu_lo <= r.mu_star);
  CHECK(r.mu_star <= r.mu_hi);
  CHECK(r.mu_hi - r.mu_lo <= 0.05 * r.mu_lo * (1.0 + 1e-12));
  CHECK(r.mu_star > 0.5);
  CHECK(r.mu_star < 0.9);
  CHECK(r.probes <= 40);

  // The bracket must actually separate the two verdicts.
  const Outcome up = classify(scalar_cfg(0.5, 1.0, 0.5, 1.1 * r.mu_hi, 20000.0));
  CHECK(up.verdict == "spreading");
  const Outcome down =
      classify(scalar_cfg(0.5, 1.0, 0.5, 0.9 * r.mu_lo, 20000.0));
  CHECK(down.verdict == "vanishing");
}

TEST_CASE("smaller seed density needs a stronger flow") {
  const CriticalMu big = critical_mu(scalar_cfg(0.5, 1.0, 0.5, 1.0, 20000.0), 0.05);
  const CriticalMu small =
      critical_mu(scalar_cfg(0.5, 1.0, 0.05, 1.0, 20000.0), 0.05);
  CHECK(small.mu_star >= 1.5 * big.mu_star);
}

TEST_CASE("the predator prey ray brackets its transition") {
  const SimConfig cfg = pair_cfg(1.0, 20000.0);
  CHECK(std::get<PredPreySpec>(cfg.model).weak_predation());

  const CriticalMu r = critical_mu(cfg, 0.05, 1.0);
  CHECK(r.mu_lo <= r.mu_hi);
  CHECK(r.mu_hi - r.mu_lo <= 0.05 * r.mu_lo * (1.0 + 1e-12));
  CHECK(r.mu_star > 10.0);
  CHECK(r.mu_star < 60.0);

  const Outcome up = classify(pair_cfg(1.1 * r.mu_hi, 20000.0));
  CHECK(up.verdict == "spreading");
  const Outcome down = classify(pair_cfg(0.9 * r.mu_lo, 20000.0));
  CHECK(down.verdict == "vanishing");
}

TEST_CASE("configurations with unconditional verdicts are rejected") {
  SimConfig cert = scalar_cfg(0.6, 1.0, 0.5, 1.0, 50.0);
  std::get<ScalarSpec>(cert.model).boundary = Boundary::neumann;
  std::get<ScalarSpec>(cert.model).reaction = Reaction::logistic(0.6, 1.0);
  CHECK_THROWS_AS((void)critical_mu(cert, 0.05), std::invalid_argument);

  const SimConfig wide = scalar_cfg(0.5, 2.0, 0.5, 1.0, 50.0);
  CHECK_THROWS_AS((void)critical_mu(wide, 0.05), std::invalid_argument);

  const SimConfig ok = scalar_cfg(0.5, 1.0, 0.5, 1.0, 50.0);
  CHECK_THROWS_AS((void)critical_mu(ok, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)critical_mu(ok, 0.05, -1.0), std::invalid_argument);

  // A budget too small to decide the first probe must abort loudly.
  const SimConfig tight = scalar_cfg(0.5, 1.0, 0.5, 1.0, 3.0);
  try {
    (void)critical_mu(tight, 0.05);
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("mu=1") != std::string::npos);
  }
}
