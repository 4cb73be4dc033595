#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "nlfb/kernel.hpp"
#include "nlfb/model.hpp"
#include "nlfb/reaction.hpp"

namespace nlfb {

/// Fixed point of the monotone relaxation sweep, with its certificate.
struct SteadyProfile {
  std::vector<double> w;          // samples at x_i = i*dx
  double dx = 0.0;
  double length = 0.0;            // interval length l or truncation window L
  double residual = 0.0;          // sup-norm of the steady equation at w
  std::size_t iterations = 0;     // relaxation sweeps
  // Largest pointwise step against the expected one-sided movement of the
  // sweep (downward from the upper start, upward from the lower start).
  // Zero up to rounding certifies the iteration stayed ordered.
  double monotone_violation = 0.0;
};

/// Which end of the ordered bracket the relaxation starts from.
enum class SteadyStart { upper, lower };

/// Positive steady state on [0, l] with a dirichlet wall (full sink d*u) or
/// neumann wall (sink d*(1 - tail(x))*u). Returns nullopt when the principal
/// eigenvalue of the linearization at 0 is <= 0, in which case 0 is the only
/// nonnegative steady state. The upper start is u == u*; the lower start is
/// a small multiple of the principal eigenfunction and probes uniqueness.
std::optional<SteadyProfile> steady_interval(Boundary bnd, const Kernel& k,
                                             const Reaction& f, double d, double l,
                                             double dx,
                                             SteadyStart start = SteadyStart::upper);

/// Half-line steady state of d*(J * u)|_(0,inf) - d*u + f(u) = 0, truncated
/// to [0, L] with the convolution closed by u == u* beyond L. The result is
/// nondecreasing with 0 < w < u*; w.front() is the wall value used by the
/// spreading-speed lower bound. Throws when the profile fails to be
/// monotone within 1e-10 (window too short).
SteadyProfile steady_halfline(const Kernel& k, const Reaction& f, double d,
                              double L, double dx);

/// Bounded positive solution of d*(J * u)|_(0,inf) - d*u + u*(coeff(x) -
/// lambda*u) = 0, truncated to [0, L] with closure u == coeff_inf / lambda.
/// coeff must be continuous with a positive lower bound and limit coeff_inf.
SteadyProfile steady_coefficient(const Kernel& k,
                                 const std::function<double(double)>& coeff,
                                 double coeff_inf, double lambda, double d,
                                 double L, double dx);

/// Explicit-Euler trajectory on the window [0, L] with zero closure beyond
/// L (which makes it the exact interval problem when L is the interval
/// length). Snapshots are taken at snap_count evenly spaced times, the last
/// one coinciding with the final state in w.
struct Evolution {
  std::vector<double> w;     // profile at t = t_end
  double t_end = 0.0;
  double dx = 0.0;
  std::vector<double> snap_times;
  std::vector<std::vector<double>> snaps;
};

/// w_t = d*(J * w)|_(0,L) - d*s(x)*w + f(w), s == 1 (dirichlet) or
/// s = 1 - tail(x) (neumann), from w(0, x) = u0(x) >= 0. Rejects dt above
/// the stability limit 0.5/(2d + Lip f).
Evolution evolve_window(Boundary bnd, const Kernel& k, const Reaction& f,
                        double d, const std::function<double(double)>& u0,
                        double L, double dx, double dt, double t_end,
                        std::size_t snap_count = 0);

/// w_t = d*(J * w)|_(0,L) - d*w + w*(coeff(t,x) - lambda*w), for trajectories
/// whose growth coefficient varies in time. coeff_sup must bound sup coeff
/// and enters the stability limit 0.5/(2d + coeff_sup + 2*lambda*range).
Evolution evolve_coefficient(const Kernel& k,
                             const std::function<double(double, double)>& coeff,
                             double coeff_sup, double lambda, double d,
                             const std::function<double(double)>& u0, double L,
                             double dx, double dt, double t_end,
                             std::size_t snap_count = 0);

}  // namespace nlfb
