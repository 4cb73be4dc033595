#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "doctest.h"
#include "nlfb/config.hpp"

using namespace nlfb;

TEST_CASE("a scalar configuration parses into the simulation spec") {
  const std::string text = R"(
# full scalar run
[model]
variant = neumann
d = 0.5
mu = 2.0
kernel = laplace 2.0
reaction = logistic 0.3 0.6   ; growth and crowding

[initial]
h0 = 1.5
u1 = constant-cap 0.4 0.1

[grid]
dx = 0.0625

[time]
t_max = 12.5
dt = 0.01
series_stride = 7
snapshot_count = 4

[stopping]
spread_h = 9.0
spread_margin = 0.25
stop_on_spread = yes
eps_vanish = 1e-7
stall_window = 5
eps_stall = 1e-9
stop_on_vanish = off
)";
  const SimConfig cfg = parse_sim_config(text);
  const auto& sc = std::get<ScalarSpec>(cfg.model);
  CHECK(sc.boundary == Boundary::neumann);
  CHECK(sc.d == 0.5);
  CHECK(sc.mu == 2.0);
  CHECK(sc.kernel.family() == "laplace");
  CHECK(sc.kernel.density(0.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sc.reaction.fprime0() == doctest::Approx(0.3));
  CHECK(sc.reaction.u_star() == doctest::Approx(0.5));

  CHECK(cfg.init.h0 == 1.5);
  CHECK(cfg.init.u1.preset == InitialProfile::Preset::constant_cap);
  CHECK(cfg.init.u1.amplitude == 0.4);
  CHECK(cfg.init.u1.ramp == 0.1);
  CHECK(!cfg.init.u2.has_value());

  CHECK(cfg.dx == 0.0625);
  CHECK(cfg.t_max == 12.5);
  CHECK(cfg.dt == 0.01);
  CHECK(cfg.series_stride == 7);
  CHECK(cfg.snapshot_count == 4);
  CHECK(cfg.spread_h == 9.0);
  CHECK(cfg.spread_margin == 0.25);
  CHECK(cfg.stop_on_spread);
  CHECK(cfg.eps_vanish == 1e-7);
  CHECK(cfg.stall_window == 5.0);
  CHECK(cfg.eps_stall == 1e-9);
  CHECK(!cfg.stop_on_vanish);
}

TEST_CASE("a predator prey configuration parses both species") {
  const std::string text = R"(
[model]
variant = predprey
kernel1 = polynomial 1.0
kernel2 = laplace 0.5
a1 = 0.3
b1 = 1.0
c1 = 0.25
a2 = 0.2
b2 = 0.9
c2 = 0.1
mu2 = 3.0

[initial]
h0 = 2.0
u1 = cosine-bump 0.4
u2 = table 0 0.1 1 0.05 2 0
)";
  const SimConfig cfg = parse_sim_config(text);
  const auto& pp = std::get<PredPreySpec>(cfg.model);
  CHECK(pp.kernel1.family() == "polynomial");
  CHECK(pp.kernel2.family() == "laplace");
  CHECK(pp.a1 == 0.3);
  CHECK(pp.b2 == 0.9);
  CHECK(pp.c2 == 0.1);
  CHECK(pp.d1 == 1.0);
  CHECK(pp.mu1 == 1.0);
  CHECK(pp.mu2 == 3.0);
  REQUIRE(cfg.init.u2.has_value());
  CHECK(cfg.init.u2->preset == InitialProfile::Preset::table);
  CHECK(cfg.init.u2->xs.size() == 3);
  CHECK(cfg.init.u2->vals[1] == 0.05);
}

TEST_CASE("optional sections fall back to the built-in defaults") {
  const std::string text = R"(
[model]
variant = dirichlet
kernel = laplace
reaction = logistic 1 1

[initial]
h0 = 2
u1 = cosine-bump 0.5
)";
  const SimConfig cfg = parse_sim_config(text);
  const SimConfig defaults;
  CHECK(cfg.dx == defaults.dx);
  CHECK(cfg.t_max == defaults.t_max);
  CHECK(cfg.dt == defaults.dt);
  CHECK(cfg.snapshot_count == defaults.snapshot_count);
  CHECK(cfg.eps_vanish == defaults.eps_vanish);
  CHECK(cfg.stop_on_vanish == defaults.stop_on_vanish);
  CHECK(std::get<ScalarSpec>(cfg.model).d == 1.0);
}

TEST_CASE("malformed configurations name the offending line") {
  auto rejects = [](const std::string& text, const std::string& needle) {
    try {
      (void)parse_sim_config(text);
      return std::string("no throw");
    } catch (const std::invalid_argument& e) {
      return std::string(e.what()).find(needle) != std::string::npos
                 ? std::string("ok")
                 : std::string(e.what());
    }
  };
  const std::string head = "[model]\nvariant = dirichlet\n"
                           "kernel = laplace\nreaction = logistic 1 1\n"
                           "[initial]\nh0 = 2\nu1 = cosine-bump 0.5\n";
  const std::string init = "[initial]\nh0 = 2\nu1 = cosine-bump 0.5\n";

  CHECK(rejects(head + "[grid]\ndz = 1\n", "unknown key 'dz'") == "ok");
  CHECK(rejects(head + "[mesh]\ndx = 1\n", "unknown section [mesh]") == "ok");
  CHECK(rejects(head + "[grid]\ndx = 0.1\ndx = 0.2\n", "duplicate key") == "ok");
  CHECK(rejects("[model]\nvariant = robin\n" + init, "unknown variant") == "ok");
  CHECK(rejects(head + "[grid]\ndx = fast\n", "as a number") == "ok");
  CHECK(rejects(head + "[stopping]\nstop_on_spread = maybe\n",
                "not a boolean") == "ok");
  CHECK(rejects(head + "[time]\nsnapshot_count = 2.5\n",
                "nonnegative integer") == "ok");
  CHECK(rejects("dx = 1\n", "outside any section") == "ok");
  CHECK(rejects("[model\n", "unterminated section") == "ok");
  CHECK(rejects("[model]\nvariant = dirichlet\nkernel = gauss 1\n" + init,
                "unknown kernel family") == "ok");
  CHECK(rejects("[model]\nvariant = dirichlet\nkernel = table 0 1 1\n" + init,
                "x j pairs") == "ok");
  CHECK(rejects("[model]\nvariant = dirichlet\nkernel = laplace\n"
                "reaction = cubic 1 1\n" + init,
                "unknown reaction") == "ok");
  CHECK(rejects(head + "[initial]\n", "duplicate section") == "ok");

  // u2 without a second species, and a missing mandatory key.
  CHECK(rejects(head + "u2 = cosine-bump 0.1\n",
                "only meaningful for variant predprey") == "ok");
  CHECK(rejects("[model]\nvariant = dirichlet\nkernel = laplace\n" + init,
                "missing key 'reaction'") == "ok");
  CHECK(rejects(init, "missing [model]") == "ok");

  // Factory validation failures carry the config line too.
  CHECK(rejects("[model]\nvariant = dirichlet\nkernel = algebraic 0.5\n" + init,
                "line 3") == "ok");
}

TEST_CASE("sweep plans resolve paths and validate targets") {
  const std::string text = R"(
[job fast-speed]
config = runs/a.ini
target = speed
window_frac = 0.25

[job star]
config = /abs/b.ini
target = mu_star
rel_tol = 0.01
mu2_ratio = 2.0
)";
  const SweepPlan plan = parse_sweep_plan(text, "/base");
  REQUIRE(plan.jobs.size() == 2);
  CHECK(plan.jobs[0].name == "fast-speed");
  CHECK(plan.jobs[0].target == "speed");
  CHECK(plan.jobs[0].config_path == "/base/runs/a.ini");
  CHECK(plan.jobs[0].window_frac == 0.25);
  CHECK(plan.jobs[0].rel_tol == 1e-3);
  CHECK(plan.jobs[1].config_path == "/abs/b.ini");
  CHECK(plan.jobs[1].rel_tol == 0.01);
  CHECK(plan.jobs[1].mu2_ratio == 2.0);

  CHECK(parse_sweep_plan("", ".").jobs.empty());
  CHECK_THROWS_AS(
      (void)parse_sweep_plan("[job a]\nconfig = x\ntarget = hue\n", "."),
      std::invalid_argument);
  CHECK_THROWS_AS((void)parse_sweep_plan(
                      "[job a]\nconfig = x\ntarget = c0\n"
                      "[job a]\nconfig = y\ntarget = c0\n",
                      "."),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_sweep_plan("[job a]\ntarget = c0\n", "."),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_sweep_plan("[run a]\nconfig = x\n", "."),
                  std::invalid_argument);
}

TEST_CASE("configuration files load from disk") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nlfb_config_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "run.ini");
    out << "[model]\nvariant = dirichlet\nkernel = laplace 1\n"
           "reaction = logistic 0.5 0.5\n[initial]\nh0 = 1\n"
           "u1 = cosine-bump 0.5\n";
  }
  const SimConfig cfg = load_sim_config((dir / "run.ini").string());
  CHECK(std::get<ScalarSpec>(cfg.model).reaction.u_star() == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)load_sim_config((dir / "absent.ini").string()),
                  std::invalid_argument);

  {
    std::ofstream out(dir / "plan.ini");
    out << "[job one]\nconfig = run.ini\ntarget = outcome\n";
  }
  const SweepPlan plan = load_sweep_plan((dir / "plan.ini").string());
  REQUIRE(plan.jobs.size() == 1);
  CHECK(plan.jobs[0].config_path == (dir / "run.ini").string());
  fs::remove_all(dir);
}
