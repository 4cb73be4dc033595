#pragma once

#include <string>
#include <vector>

#include "nlfb/simulate.hpp"

namespace nlfb {

/// Parses a structured-text run configuration. Sections and keys:
///
///   [model]    variant = dirichlet | neumann | predprey
///              scalar:   d, mu, kernel, reaction
///              predprey: d1, d2, mu1, mu2, kernel1, kernel2,
///                        a1, b1, c1, a2, b2, c2
///   [initial]  h0, u1 (and u2 for predprey)
///   [grid]     dx
///   [time]     t_max, dt, series_stride, snapshot_count
///   [stopping] spread_h, spread_margin, stop_on_spread,
///              eps_vanish, stall_window, eps_stall, stop_on_vanish
///
/// Kernel values: "laplace [scale]", "polynomial [radius]",
/// "algebraic <gamma>", "table x0 j0 x1 j1 ...". Reaction values:
/// "logistic <a> <b>". Profile values: "cosine-bump <amplitude>",
/// "constant-cap <amplitude> [ramp]", "table x0 v0 x1 v1 ...".
/// Comments start at '#' or ';'. Unknown sections or keys, duplicate keys
/// and malformed values all throw std::invalid_argument naming the line.
SimConfig parse_sim_config(const std::string& text);

/// parse_sim_config on the contents of the file at path.
SimConfig load_sim_config(const std::string& path);

/// One sweep job: a run configuration plus the quantity to extract from it.
struct SweepJob {
  std::string name;
  std::string target;       // speed | outcome | mu_star | l_star | c0
  std::string config_path;  // resolved against the plan file directory
  double rel_tol = 1e-3;    // mu_star bracket width
  double mu2_ratio = 1.0;   // mu_star ray direction for two species
  double window_frac = 0.5; // speed fit window
  double mass_cap = 40.0;   // c0 truncation window
};

struct SweepPlan {
  std::vector<SweepJob> jobs;
};

/// Parses a sweep plan: one "[job <name>]" section per job with keys
/// config (path), target, and optional rel_tol, mu2_ratio, window_frac,
/// mass_cap. Relative config paths are resolved against base_dir.
SweepPlan parse_sweep_plan(const std::string& text,
                           const std::string& base_dir = ".");

/// parse_sweep_plan on the file at path, resolving against its directory.
SweepPlan load_sweep_plan(const std::string& path);

}  // namespace nlfb
