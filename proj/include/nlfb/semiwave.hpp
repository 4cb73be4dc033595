#pragma once

#include <cstddef>
#include <vector>

#include "nlfb/kernel.hpp"
#include "nlfb/model.hpp"
#include "nlfb/reaction.hpp"

namespace nlfb {

/// Semi-wave front: a nonincreasing profile on [-M, 0] with phi(0) = 0 and
/// phi(-M) ~ u*, whose speed balances the boundary flux functional.
struct SemiWave {
  double c0 = 0.0;
  std::vector<double> phi;  // samples at x_i = -M + i*dx, phi.back() == 0
  double M = 0.0;           // truncation window (grown adaptively)
  double dx = 0.0;
  double residual = 0.0;    // sup-norm of the profile equation at phi
  double flux_gap = 0.0;    // |c0 - mu * flux(phi)|
};

/// Stationary profile of the forced problem at prescribed front speed c >= 0:
/// pseudo-time marching of phi_tau = d*(J * phi) - d*phi + c*phi' + f(phi)
/// on [-M, 0), with phi(0) pinned to 0, the convolution closed by phi == u*
/// left of -M, upwind differencing for phi' (information travels toward the
/// front since c >= 0), and a projection onto the nonincreasing cone after
/// every step. Marched until the per-step sup-change falls below 1e-12.
std::vector<double> profile_for_speed(const Kernel& k, const Reaction& f, double d,
                                      double c, double M, double dx);

/// Semi-wave speed and profile: the root of mu*flux(phi_c) - c located by
/// bisection (tolerance 1e-8 in c) inside a sign-change bracket grown by
/// doubling. The flux functional integrates phi against the escape tail
/// T(-x) and closes the far field with u* * S(M). M doubles (at most four
/// times) until u* - phi(-M/2) < 1e-6. Kernels with a divergent first
/// moment have no finite semi-wave speed and are refused with
/// std::domain_error.
SemiWave solve_semiwave(const Kernel& k, const Reaction& f, double d, double mu,
                        double M = 40.0, double dx = 1.0 / 64.0);

/// Speed pair governing the shared predator-prey front: the prey wave from
/// u*(a1 - b1*u) with (d1, mu1, kernel1), the predator wave from
/// u*(a2 + c2*a1/b1 - b2*u) with (d2, mu2, kernel2).
struct SpeedPair {
  SemiWave prey;
  SemiWave predator;
};
SpeedPair lotka_volterra_speeds(const PredPreySpec& spec, double M = 40.0,
                                double dx = 1.0 / 64.0);

}  // namespace nlfb
