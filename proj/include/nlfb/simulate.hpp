#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nlfb/model.hpp"

namespace nlfb {

/// Simulation state at one instant: time t, front position h, and density
/// samples at the nodes x_i = i*dx with x_i < h. The density at and beyond
/// the front is 0 by definition; quadrature treats the last cell as falling
/// linearly to 0 at h. Two-species states carry u2 on the same nodes.
struct FrontState {
  double t = 0.0;
  double h = 0.0;
  double dx = 0.0;
  std::vector<double> u1;
  std::vector<double> u2;  // empty for scalar models

  bool two_species() const { return !u2.empty(); }
  /// Nodes currently behind the front.
  std::size_t size() const { return u1.size(); }
};

/// Samples the initial data onto the grid: u1.size() nodes with x_i < h0.
FrontState make_initial_state(const ModelSpec& spec, const InitialData& init,
                              double dx);

/// One explicit Euler step. The density update uses the current window
/// [0, h]: u_i += dt * (d * (J*u)_i - d * s_i * u_i + f(u_i)) with the full
/// wall sink s = 1 (dirichlet and both predator-prey species) or the
/// position-dependent sink s(x) = 1 - tail(x) (neumann). The front moves by
/// dt times the boundary flux of the old state; nodes entering (h_old,
/// h_new] start at 0. Densities in [-1e-14, 0) are rounding noise and are
/// zeroed; anything lower, or non-finite, aborts with a state dump.
///
/// Throws std::invalid_argument when dt exceeds half the explicit stability
/// limit 1/(2*d_max + Lip f) and std::runtime_error on divergence.
FrontState step(const ModelSpec& spec, const FrontState& s, double dt);

/// True when the linearization at zero density outgrows dispersal loss no
/// matter how short the occupied interval is (f'(0) >= d for a dirichlet
/// wall, f'(0) >= d/2 for neumann, either species for predator-prey), so
/// every front spreads and no finite threshold length exists.
bool spreading_certificate(const ModelSpec& spec);

/// Finite front-length threshold: beyond it the principal eigenvalue of the
/// occupied interval is positive and spreading is certain. Two-species specs
/// take the smaller of the per-species thresholds. nullopt when
/// spreading_certificate holds (no finite threshold) or growth at zero
/// density is nonpositive (front never certifies).
std::optional<double> spectral_threshold(const ModelSpec& spec,
                                         double dx = 1.0 / 64.0);

struct SimConfig {
  ModelSpec model;
  InitialData init;
  double dx = 1.0 / 32.0;
  /// Time step; 0 picks half the documented bound 0.5/(2*d_max + Lip f).
  double dt = 0.0;
  double t_max = 100.0;
  /// Series cadence in steps; 0 picks one sample per ~0.1 time units.
  std::size_t series_stride = 0;
  /// Snapshot count spread evenly over [0, t_max]; the final state is
  /// always appended.
  std::size_t snapshot_count = 50;

  /// Front threshold certifying spreading: >0 explicit, 0 auto
  /// (spectral_threshold + spread_margin), <0 disables the check.
  double spread_h = 0.0;
  double spread_margin = 0.5;
  /// Stop as soon as the threshold is crossed (off by default so speed
  /// measurements see the full trajectory).
  bool stop_on_spread = false;

  /// Vanishing rule: sup u below eps_vanish while h gained less than
  /// eps_stall over the trailing stall_window time units.
  double eps_vanish = 1e-8;
  double stall_window = 10.0;
  double eps_stall = 1e-10;
  bool stop_on_vanish = true;
};

/// Trajectory-level record of one run: series at the configured cadence
/// (always including t = 0 and the final state), snapshots, and a terminal
/// classification hint with its evidence.
struct Trajectory {
  std::vector<double> t, h, sup, mass;
  std::vector<FrontState> snapshots;
  std::string hint;         // "spreading" | "vanishing" | "undecided"
  std::string stop_reason;  // evidence for the hint / why the run ended
  double dx = 0.0;
  double dt = 0.0;
  /// Threshold the run used for the spreading hint (0 = none applied).
  double spread_threshold = 0.0;
  /// Unconditional spreading criterion held, so the hint never waits on the
  /// threshold crossing.
  bool certificate = false;
};

/// Integrates to t_max or the first triggered stopping rule, recording
/// series, snapshots, and bound checks (every 100 steps: positivity, the
/// a-priori sup bound, finite values, monotone front).
Trajectory run(const SimConfig& cfg);

/// Front speed read off a trajectory: least-squares slope of h(t) over the
/// trailing window_frac of the series, plus the plain secant h(T)/T at the
/// final time. Throws when the window holds fewer than 10 samples.
struct SpeedEstimate {
  double slope = 0.0;
  double secant = 0.0;
  std::size_t window_samples = 0;
};
SpeedEstimate front_speed(const Trajectory& traj, double window_frac = 0.5);

/// Dyadic front-speed ratios s_k = h(2^k T0)/(2^k T0). "accelerating" when
/// the last three ratios s_{k+1}/s_k all exceed 1.15, "linear" when they
/// all sit inside [0.98, 1.05], otherwise "inconclusive". t0 = 0 picks
/// T0 = t_final/8 (four checkpoints); an explicit t0 must leave at least
/// four.
struct AccelerationReport {
  std::vector<double> times;
  std::vector<double> speeds;
  std::vector<double> ratios;
  std::string flag;
};
AccelerationReport acceleration_probe(const Trajectory& traj, double t0 = 0.0);

}  // namespace nlfb
