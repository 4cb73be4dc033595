#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "nlfb/config.hpp"
#include "nlfb/io.hpp"
#include "nlfb/simulate.hpp"
#include "nlfb/sweep.hpp"

using namespace nlfb;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

SimConfig small_run() {
  SimConfig cfg;
  ScalarSpec sc;
  sc.boundary = Boundary::dirichlet;
  sc.kernel = Kernel::laplace(1.0);
  sc.d = 0.5;
  sc.mu = 1.0;
  sc.reaction = Reaction::logistic(1.0, 1.0);
  cfg.model = sc;
  cfg.init.h0 = 2.0;
  cfg.init.u1.preset = InitialProfile::Preset::cosine_bump;
  cfg.init.u1.amplitude = 0.5;
  cfg.dx = 0.125;
  cfg.t_max = 5.0;
  cfg.snapshot_count = 3;
  return cfg;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("series, snapshots and meta land on disk in the declared shape") {
  const fs::path dir = fresh_dir("nlfb_io_test");
  const Trajectory traj = run(small_run());

  write_series_csv((dir / "series.csv").string(), traj);
  const auto series = lines_of(slurp(dir / "series.csv"));
  REQUIRE(series.size() == traj.t.size() + 1);
  CHECK(series[0] == "t,h,supU,mass");
  CHECK(series[1].rfind("0,2,", 0) == 0);

  write_snapshot_csvs((dir / "snapshots").string(), traj);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[16];
    std::snprintf(name, sizeof name, "u%03zu.csv", k);
    const auto snap = lines_of(slurp(dir / "snapshots" / name));
    REQUIRE(snap.size() >= 3);
    CHECK(snap[0].rfind("# t = ", 0) == 0);
    CHECK(snap[1] == "x,u");
    CHECK(snap.size() == traj.snapshots[k].size() + 2);
  }

  write_meta((dir / "meta.txt").string(), traj);
  const std::string meta = slurp(dir / "meta.txt");
  CHECK(meta.find("[run]") != std::string::npos);
  CHECK(meta.find("hint = ") != std::string::npos);
  CHECK(meta.find("slope = ") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("csv fields with separators are quoted on the way out") {
  const fs::path dir = fresh_dir("nlfb_csv_test");
  write_csv((dir / "r.csv").string(), {"a", "b"},
            {{"plain", "needs, quoting"}, {"has \"quote\"", "x"}});
  const auto rows = lines_of(slurp(dir / "r.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "a,b");
  CHECK(rows[1] == "plain,\"needs, quoting\"");
  CHECK(rows[2] == "\"has \"\"quote\"\"\",x");
  fs::remove_all(dir);
}

TEST_CASE("a sweep runs every job and keeps failures contained") {
  const fs::path dir = fresh_dir("nlfb_sweep_test");
  {
    std::ofstream out(dir / "cert.ini");
    out << "[model]\nvariant = dirichlet\nd = 0.5\nkernel = laplace 1\n"
           "reaction = logistic 1 1\n[initial]\nh0 = 2\nu1 = cosine-bump 0.5\n"
           "[grid]\ndx = 0.125\n[time]\nt_max = 30\nsnapshot_count = 2\n";
  }
  {
    std::ofstream out(dir / "sub.ini");
    out << "[model]\nvariant = dirichlet\nkernel = laplace 1\n"
           "reaction = logistic 0.5 0.5\n[initial]\nh0 = 1\n"
           "u1 = cosine-bump 0.5\n[grid]\ndx = 0.0625\n";
  }
  {
    std::ofstream out(dir / "plan.ini");
    out << "[job grow]\nconfig = cert.ini\ntarget = outcome\n"
        << "[job pace]\nconfig = cert.ini\ntarget = speed\n"
        << "[job length]\nconfig = sub.ini\ntarget = l_star\n"
        << "[job wave]\nconfig = sub.ini\ntarget = c0\nmass_cap = 20\n"
        << "[job ghost]\nconfig = missing.ini\ntarget = outcome\n"
        << "[job wrong]\nconfig = cert.ini\ntarget = mu_star\n";
  }

  const SweepPlan plan = load_sweep_plan((dir / "plan.ini").string());
  const auto results = run_sweep(plan, (dir / "out").string(), 2);
  REQUIRE(results.size() == 6);

  CHECK(results[0].name == "grow");
  CHECK(results[0].status == "ok");
  CHECK(results[0].value == "spreading");
  CHECK(results[1].status == "ok");
  CHECK(std::stod(results[1].value) > 0.0);
  CHECK(results[2].status == "ok");
  CHECK(std::stod(results[2].value) > 1.0);
  CHECK(results[3].status == "ok");
  CHECK(std::stod(results[3].value) > 0.0);

  // The broken jobs fail alone: a missing config and an unconditional
  // regime where no critical flow strength exists.
  CHECK(results[4].status == "error");
  CHECK(!results[4].detail.empty());
  CHECK(results[5].status == "error");
  CHECK(results[5].detail.find("every mu") != std::string::npos);

  const auto report = lines_of(slurp(dir / "out" / "report.csv"));
  REQUIRE(report.size() == 7);
  CHECK(report[0] == "name,target,status,value,detail");
  CHECK(report[1].rfind("grow,outcome,ok,spreading", 0) == 0);
  CHECK(report[5].rfind("ghost,outcome,error", 0) == 0);

  // Per-job artifacts: every successful job leaves result.txt, the speed
  // job leaves its series and meta next to it.
  CHECK(fs::exists(dir / "out" / "grow" / "result.txt"));
  CHECK(fs::exists(dir / "out" / "pace" / "series.csv"));
  CHECK(fs::exists(dir / "out" / "pace" / "meta.txt"));
  CHECK(fs::exists(dir / "out" / "wave" / "result.txt"));
  fs::remove_all(dir);
}

TEST_CASE("an empty plan produces an empty report") {
  const fs::path dir = fresh_dir("nlfb_sweep_empty");
  const auto results = run_sweep(SweepPlan{}, (dir / "out").string());
  CHECK(results.empty());
  const auto report = lines_of(slurp(dir / "out" / "report.csv"));
  REQUIRE(report.size() == 1);
  CHECK(report[0] == "name,target,status,value,detail");
  fs::remove_all(dir);
}
