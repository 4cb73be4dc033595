#pragma once

#include <cstddef>
#include <string>

#include "nlfb/simulate.hpp"

namespace nlfb {

/// Long-run verdict for one configuration, with the evidence that produced
/// it. Every decided verdict is backed either by a certificate (growth or
/// front length) or by a terminated run satisfying its stopping rule.
struct Outcome {
  std::string verdict;  // "spreading" | "vanishing" | "undecided"
  std::string evidence;
  /// Finite certifying front length when one exists (0 otherwise).
  double threshold = 0.0;
  double terminal_h = 0.0;
  double terminal_sup = 0.0;
  /// Principal eigenvalue of the occupied interval at the end: positive
  /// values mean the interval already sustains growth.
  double lambda_at_terminal = 0.0;
  /// False when a certificate decided without time integration.
  bool simulated = false;
};

/// Decision procedure: (i) the unconditional growth certificate, (ii) the
/// initial front already at or past the certifying length, (iii) otherwise
/// integrate with both stopping rules armed and map the trajectory hint.
/// "undecided" is a value (budget exhausted), never an error.
Outcome classify(const SimConfig& cfg);

/// Result of the critical-flux-factor search: the final bracket (mu_lo
/// vanishes, mu_hi spreads), its geometric midpoint, and the probe count.
struct CriticalMu {
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double mu_star = 0.0;
  std::size_t probes = 0;
};

/// Bisection on the flux factor between a vanishing and a spreading probe,
/// bracketing by doubling/halving from mu = 1. Requires the conditional
/// regime (no growth certificate, initial front below the threshold);
/// anything else spreads for every mu and is rejected. Two-species specs
/// are probed along the ray mu2 = mu2_ratio * mu1, and mu refers to mu1.
/// An undecided probe aborts with the offending mu in the message: raise
/// cfg.t_max. Probes run at cfg's grid with both stopping rules armed.
CriticalMu critical_mu(const SimConfig& cfg, double rel_tol = 1e-3,
                       double mu2_ratio = 1.0);

}  // namespace nlfb
