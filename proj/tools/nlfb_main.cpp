#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "nlfb/classify.hpp"
#include "nlfb/config.hpp"
#include "nlfb/io.hpp"
#include "nlfb/semiwave.hpp"
#include "nlfb/spectral.hpp"
#include "nlfb/steady.hpp"
#include "nlfb/sweep.hpp"

namespace {

using namespace nlfb;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Emits CSV lines to the file at path, or to stdout when path is empty.
void emit_lines(const std::string& path, const std::vector<std::string>& lines) {
  if (path.empty()) {
    for (const auto& l : lines) std::cout << l << '\n';
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (const auto& l : lines) out << l << '\n';
  std::cout << "wrote " << path << '\n';
}

const ScalarSpec& scalar_model(const SimConfig& cfg, const char* sub) {
  if (const auto* sc = std::get_if<ScalarSpec>(&cfg.model)) return *sc;
  throw std::invalid_argument(std::string(sub) +
                              ": needs a single-species model config");
}

int cmd_eigen(const std::string& config, double l_min, double l_max,
              int steps, double dx, const std::string& out) {
  const SimConfig cfg = load_sim_config(config);
  const ScalarSpec& sc = scalar_model(cfg, "eigen");
  if (steps < 2) throw std::invalid_argument("eigen: need at least 2 steps");
  std::vector<std::string> lines{"l,lambda,residual,iterations"};
  for (int i = 0; i < steps; ++i) {
    const double l = l_min + (l_max - l_min) * i / (steps - 1);
    const SpectralResult r = principal_eigenvalue(
        sc.boundary, sc.kernel, sc.d, sc.reaction.fprime0(), l, dx);
    std::ostringstream row;
    row << num(l) << ',' << num(r.lambda) << ',' << num(r.residual) << ','
        << r.power_iterations + r.refine_iterations;
    lines.push_back(row.str());
  }
  emit_lines(out, lines);
  return 0;
}

int cmd_steady(const std::string& config, double l, double window,
               const std::string& start, const std::string& out) {
  const SimConfig cfg = load_sim_config(config);
  const ScalarSpec& sc = scalar_model(cfg, "steady");
  std::vector<std::string> lines{"x,W"};
  auto push_profile = [&](const SteadyProfile& p) {
    for (std::size_t i = 0; i < p.w.size(); ++i) {
      std::ostringstream row;
      row << num(i * p.dx) << ',' << num(p.w[i]);
      lines.push_back(row.str());
    }
    std::ostringstream tail;
    tail << "# residual = " << num(p.residual)
         << ", iterations = " << p.iterations;
    lines.push_back(tail.str());
  };
  if (l > 0.0) {
    const SteadyStart s =
        start == "lower" ? SteadyStart::lower : SteadyStart::upper;
    const auto p = steady_interval(sc.boundary, sc.kernel, sc.reaction, sc.d,
                                   l, cfg.dx, s);
    if (!p) {
      std::cout << "no positive steady state on [0, " << num(l)
                << "]: the zero state is the only fixed point\n";
      return 0;
    }
    push_profile(*p);
  } else {
    push_profile(steady_halfline(sc.kernel, sc.reaction, sc.d, window, cfg.dx));
  }
  emit_lines(out, lines);
  return 0;
}

int cmd_semiwave(const std::string& config, double M,
                 const std::string& out) {
  const SimConfig cfg = load_sim_config(config);
  if (const auto* sc = std::get_if<ScalarSpec>(&cfg.model)) {
    const SemiWave sw =
        solve_semiwave(sc->kernel, sc->reaction, sc->d, sc->mu, M, cfg.dx);
    std::cout << "c0 = " << num(sw.c0) << '\n'
              << "flux_gap = " << num(sw.flux_gap) << '\n'
              << "residual = " << num(sw.residual) << '\n';
    if (!out.empty()) {
      std::vector<std::string> lines{"x,phi"};
      for (std::size_t i = 0; i < sw.phi.size(); ++i) {
        std::ostringstream row;
        row << num(-sw.M + i * sw.dx) << ',' << num(sw.phi[i]);
        lines.push_back(row.str());
      }
      emit_lines(out, lines);
    }
    return 0;
  }
  const auto& pp = std::get<PredPreySpec>(cfg.model);
  const SpeedPair sp = lotka_volterra_speeds(pp, M, cfg.dx);
  std::cout << "c1 = " << num(sp.prey.c0) << '\n'
            << "c2 = " << num(sp.predator.c0) << '\n';
  if (!out.empty()) {
    std::vector<std::string> lines{"x,phi1,phi2"};
    const std::size_t n = std::min(sp.prey.phi.size(), sp.predator.phi.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::ostringstream row;
      row << num(-sp.prey.M + i * sp.prey.dx) << ',' << num(sp.prey.phi[i])
          << ',' << num(sp.predator.phi[i]);
      lines.push_back(row.str());
    }
    emit_lines(out, lines);
  }
  return 0;
}

int cmd_simulate(const std::string& config, const std::string& out_dir) {
  const SimConfig cfg = load_sim_config(config);
  const Trajectory traj = run(cfg);
  const std::filesystem::path out(out_dir);
  write_series_csv((out / "series.csv").string(), traj);
  write_snapshot_csvs((out / "snapshots").string(), traj);
  write_meta((out / "meta.txt").string(), traj);
  std::cout << "hint = " << traj.hint << '\n'
            << "stop_reason = " << traj.stop_reason << '\n'
            << "t_final = " << num(traj.t.back()) << '\n'
            << "h_final = " << num(traj.h.back()) << '\n'
            << "sup_final = " << num(traj.sup.back()) << '\n'
            << "wrote " << (out / "series.csv").string() << ", "
            << (out / "snapshots").string() << ", "
            << (out / "meta.txt").string() << '\n';
  return 0;
}

int cmd_classify(const std::string& config) {
  const Outcome o = classify(load_sim_config(config));
  std::cout << "verdict = " << o.verdict << '\n'
            << "evidence = " << o.evidence << '\n';
  if (o.threshold > 0.0)
    std::cout << "threshold = " << num(o.threshold) << '\n';
  std::cout << "terminal_h = " << num(o.terminal_h) << '\n'
            << "terminal_sup = " << num(o.terminal_sup) << '\n'
            << "lambda_at_terminal = " << num(o.lambda_at_terminal) << '\n'
            << "simulated = " << (o.simulated ? "true" : "false") << '\n';
  return 0;
}

int cmd_critical_mu(const std::string& config, double rel_tol,
                    double mu2_ratio) {
  const CriticalMu r = critical_mu(load_sim_config(config), rel_tol, mu2_ratio);
  std::cout << "mu_lo = " << num(r.mu_lo) << '\n'
            << "mu_hi = " << num(r.mu_hi) << '\n'
            << "mu_star = " << num(r.mu_star) << '\n'
            << "probes = " << r.probes << '\n';
  return 0;
}

int cmd_critical_length(const std::string& config, double dx) {
  const SimConfig cfg = load_sim_config(config);
  if (const auto* sc = std::get_if<ScalarSpec>(&cfg.model)) {
    const auto l = critical_length(sc->boundary, sc->kernel, sc->d,
                                   sc->reaction.fprime0(), dx);
    if (l)
      std::cout << "l_star = " << num(*l) << '\n';
    else
      std::cout << "l_star = none (spreading is unconditional)\n";
    return 0;
  }
  const auto& pp = std::get<PredPreySpec>(cfg.model);
  const auto l1 =
      critical_length(Boundary::dirichlet, pp.kernel1, pp.d1, pp.a1, dx);
  const auto l2 =
      critical_length(Boundary::dirichlet, pp.kernel2, pp.d2, pp.a2, dx);
  std::cout << "l_star_1 = " << (l1 ? num(*l1) : "none") << '\n'
            << "l_star_2 = " << (l2 ? num(*l2) : "none") << '\n';
  if (l1 && l2)
    std::cout << "l_star = " << num(std::min(*l1, *l2)) << '\n';
  else
    std::cout << "l_star = none (spreading is unconditional)\n";
  return 0;
}

int cmd_sweep(const std::string& plan_path, const std::string& out_dir,
              unsigned workers) {
  const SweepPlan plan = load_sweep_plan(plan_path);
  const auto results = run_sweep(plan, out_dir, workers);
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::cout << r.name << ": " << r.status;
    if (r.status == "ok")
      std::cout << ' ' << r.value;
    else
      ++failed;
    std::cout << '\n';
  }
  std::cout << results.size() << " jobs, " << failed << " failed, report at "
            << (std::filesystem::path(out_dir) / "report.csv").string()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal diffusion free boundary laboratory"};
  app.require_subcommand(1);

  std::string config, out, plan, start = "upper";
  double l_min = 0.25, l_max = 8.0, dx = 1.0 / 64.0, l = 0.0, window = 40.0;
  double M = 40.0, rel_tol = 1e-3, mu2_ratio = 1.0;
  int steps = 32;
  unsigned workers = 0;

  auto* eigen = app.add_subcommand(
      "eigen", "principal eigenvalue over a ladder of interval lengths");
  eigen->add_option("--config", config, "model config file")->required();
  eigen->add_option("--l-min", l_min, "smallest interval length");
  eigen->add_option("--l-max", l_max, "largest interval length");
  eigen->add_option("--steps", steps, "ladder size");
  eigen->add_option("--dx", dx, "eigensolver grid spacing");
  eigen->add_option("--out", out, "CSV path (stdout when absent)");

  auto* steady = app.add_subcommand(
      "steady", "positive steady state on an interval or the half line");
  steady->add_option("--config", config, "model config file")->required();
  steady->add_option("--l", l, "interval length; 0 solves the half line");
  steady->add_option("--window", window, "half-line truncation window");
  steady->add_option("--start", start, "relaxation start: upper | lower")
      ->check(CLI::IsMember({"upper", "lower"}));
  steady->add_option("--out", out, "CSV path (stdout when absent)");

  auto* semiwave = app.add_subcommand(
      "semiwave", "semi-wave speed c0 and profile for the moving frame");
  semiwave->add_option("--config", config, "model config file")->required();
  semiwave->add_option("--M", M, "truncation window");
  semiwave->add_option("--out", out, "profile CSV path");

  auto* simulate = app.add_subcommand(
      "simulate", "advance the free boundary problem and save the run");
  simulate->add_option("--config", config, "run config file")->required();
  simulate->add_option("--out", out, "output directory")->required();

  auto* classify_cmd = app.add_subcommand(
      "classify", "decide spreading versus vanishing for one config");
  classify_cmd->add_option("--config", config, "run config file")->required();

  auto* cmu = app.add_subcommand(
      "critical-mu", "bracket the critical front strength mu*");
  cmu->add_option("--config", config, "run config file")->required();
  cmu->add_option("--rel-tol", rel_tol, "relative bracket width");
  cmu->add_option("--mu2-ratio", mu2_ratio,
                  "two species ray direction mu2 = ratio * mu1");

  auto* clen = app.add_subcommand(
      "critical-length", "critical interval length l* of the model");
  clen->add_option("--config", config, "model config file")->required();
  clen->add_option("--dx", dx, "eigensolver grid spacing");

  auto* sweep = app.add_subcommand(
      "sweep", "run a plan of jobs and collect a CSV report");
  sweep->add_option("--plan", plan, "plan file")->required();
  sweep->add_option("--out", out, "report directory")->required();
  sweep->add_option("--workers", workers, "worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eigen->parsed())
      return cmd_eigen(config, l_min, l_max, steps, dx, out);
    if (steady->parsed()) return cmd_steady(config, l, window, start, out);
    if (semiwave->parsed()) return cmd_semiwave(config, M, out);
    if (simulate->parsed()) return cmd_simulate(config, out);
    if (classify_cmd->parsed()) return cmd_classify(config);
    if (cmu->parsed()) return cmd_critical_mu(config, rel_tol, mu2_ratio);
    if (clen->parsed()) return cmd_critical_length(config, dx);
    if (sweep->parsed()) return cmd_sweep(plan, out, workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
