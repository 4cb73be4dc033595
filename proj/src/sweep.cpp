#include "nlfb/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "nlfb/classify.hpp"
#include "nlfb/io.hpp"
#include "nlfb/semiwave.hpp"

namespace nlfb {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string safe_dir_name(const std::string& name) {
  std::string out;
  for (const char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
            c == '_' || c == '.')
               ? c
               : '_';
  return out;
}

void write_result_txt(const std::filesystem::path& dir,
                      const SweepResult& r) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "result.txt");
  out << "name = " << r.name << '\n'
      << "target = " << r.target << '\n'
      << "status = " << r.status << '\n'
      << "value = " << r.value << '\n'
      << "detail = " << r.detail << '\n';
}

SweepResult run_job(const SweepJob& job, const std::filesystem::path& out) {
  SweepResult r{job.name, job.target, "ok", "", ""};
  const std::filesystem::path art = out / safe_dir_name(job.name);
  const SimConfig cfg = load_sim_config(job.config_path);

  if (job.target == "outcome") {
    const Outcome o = classify(cfg);
    r.value = o.verdict;
    std::ostringstream d;
    d << o.evidence << "; threshold=" << num(o.threshold)
      << "; h=" << num(o.terminal_h) << "; lambda="
      << num(o.lambda_at_terminal) << (o.simulated ? "; simulated" : "");
    r.detail = d.str();
  } else if (job.target == "speed") {
    const Trajectory traj = run(cfg);
    const SpeedEstimate sp = front_speed(traj, job.window_frac);
    r.value = num(sp.slope);
    std::ostringstream d;
    d << "secant=" << num(sp.secant)
      << "; window_samples=" << sp.window_samples << "; hint=" << traj.hint;
    r.detail = d.str();
    write_series_csv((art / "series.csv").string(), traj);
    write_meta((art / "meta.txt").string(), traj);
  } else if (job.target == "mu_star") {
    const CriticalMu cm = critical_mu(cfg, job.rel_tol, job.mu2_ratio);
    r.value = num(cm.mu_star);
    std::ostringstream d;
    d << "lo=" << num(cm.mu_lo) << "; hi=" << num(cm.mu_hi)
      << "; probes=" << cm.probes;
    r.detail = d.str();
  } else if (job.target == "l_star") {
    if (const auto thr = spectral_threshold(cfg.model)) {
      r.value = num(*thr);
      r.detail = "zero crossing of the principal eigenvalue over the length";
    } else {
      r.value = "none";
      r.detail = "unconditional spreading: growth at zero density beats "
                 "dispersal on every interval";
    }
  } else if (job.target == "c0") {
    if (const auto* sc = std::get_if<ScalarSpec>(&cfg.model)) {
      const SemiWave sw = solve_semiwave(sc->kernel, sc->reaction, sc->d,
                                         sc->mu, job.mass_cap, cfg.dx);
      r.value = num(sw.c0);
      std::ostringstream d;
      d << "flux_gap=" << num(sw.flux_gap)
        << "; residual=" << num(sw.residual) << "; M=" << num(sw.M);
      r.detail = d.str();
    } else {
      const auto& pp = std::get<PredPreySpec>(cfg.model);
      const SpeedPair sp = lotka_volterra_speeds(pp, job.mass_cap, cfg.dx);
      r.value = num(sp.prey.c0);
      std::ostringstream d;
      d << "c2=" << num(sp.predator.c0);
      r.detail = d.str();
    }
  }
  write_result_txt(art, r);
  return r;
}

}  // namespace

std::vector<SweepResult> run_sweep(const SweepPlan& plan,
                                   const std::string& out_dir,
                                   unsigned workers) {
  const std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);

  std::vector<SweepResult> results(plan.jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.jobs.size()) return;
      try {
        results[i] = run_job(plan.jobs[i], out);
      } catch (const std::exception& e) {
        results[i] = {plan.jobs[i].name, plan.jobs[i].target, "error", "",
                      e.what()};
      }
    }
  };

  unsigned n = workers ? workers : std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  n = static_cast<unsigned>(
      std::min<std::size_t>(n, std::max<std::size_t>(plan.jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k + 1 < n; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::vector<CsvRow> rows;
  for (const auto& r : results)
    rows.push_back({r.name, r.target, r.status, r.value, r.detail});
  write_csv((out / "report.csv").string(),
            {"name", "target", "status", "value", "detail"}, rows);
  return results;
}

}  // namespace nlfb
