#include "nlfb/steady.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "nlfb/grid.hpp"
#include "nlfb/nonlocal.hpp"
#include "nlfb/spectral.hpp"

namespace nlfb {
namespace {

constexpr double kSweepTol = 1e-12;  // sup-norm change that ends the relaxation
constexpr std::size_t kSweepCap = 1000000;

struct Window {
  double dx = 0.0;
  std::size_t n = 0;  // nodes x_i = i*dx, i < n
};

// Shared grid policy: round to whole cells, at least 32 of them.
Window make_window(double len, double dx_req, const char* who) {
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw std::invalid_argument(std::string(who) + ": length must be positive and finite");
  }
  if (!(dx_req > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": dx must be positive");
  }
  const auto cells = std::max<long long>(32, std::llround(len / dx_req));
  return {len / static_cast<double>(cells), static_cast<std::size_t>(cells) + 1};
}

// Relaxation sweep u <- u + F(u)/beta with
//   F_i = d*conv_i + closure_i - d*sink_i*u_i + g(i, u_i).
// beta must exceed d*sup(sink) + sup|g'| so the sweep map is monotone in u;
// an ordered start then moves one-sidedly, and dir (+1 when descending from
// an upper start, -1 when ascending from a lower one) selects which side
// counts as a violation.
template <typename Field>
SteadyProfile relax(KernelTable& table, double len, std::span<const double> weights,
                    std::vector<double> u, double d, double beta,
                    std::span<const double> sink, std::span<const double> closure,
                    double dir, Field&& g, const char* who) {
  ConvScratch scratch;
  const std::size_t n = u.size();
  std::vector<double> next(n);
  double viol = 0.0;
  std::size_t it = 0;
  for (;;) {
    if (it >= kSweepCap) {
      throw std::runtime_error(std::string(who) + ": relaxation did not converge");
    }
    ++it;
    auto conv = convolve(table, u, weights, scratch);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double F = d * conv[i] + closure[i] - d * sink[i] * u[i] + g(i, u[i]);
      next[i] = u[i] + F / beta;
      const double delta = next[i] - u[i];
      change = std::fmax(change, std::fabs(delta));
      viol = std::fmax(viol, dir * delta);
    }
    u.swap(next);
    if (change < kSweepTol) break;
  }
  // Residual certificate: one more evaluation of F at the settled profile.
  auto conv = convolve(table, u, weights, scratch);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res = std::fmax(res, std::fabs(d * conv[i] + closure[i] - d * sink[i] * u[i] +
                                   g(i, u[i])));
  }
  SteadyProfile out;
  out.w = std::move(u);
  out.dx = table.dx();
  out.length = len;
  out.residual = res;
  out.iterations = it;
  out.monotone_violation = viol;
  return out;
}

// Time marching w <- w + dt*(d*conv + g(i, t, w_i) - d*sink_i*w_i) with the
// step count rounded so the trajectory lands on t_end exactly.
template <typename Field>
Evolution march(KernelTable& table, std::span<const double> weights,
                std::vector<double> w, std::span<const double> sink, double d,
                double dt_req, double t_end, std::size_t snap_count, Field&& g) {
  const auto steps = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(t_end / dt_req - 1e-9)));
  const double dt = t_end / static_cast<double>(steps);
  Evolution out;
  out.dx = table.dx();
  ConvScratch scratch;
  const std::size_t n = w.size();
  std::vector<double> next(n);
  std::size_t snap_next = 1;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = dt * static_cast<double>(s);
    auto conv = convolve(table, w, weights, scratch);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = w[i] + dt * (d * conv[i] - d * sink[i] * w[i] + g(i, t, w[i]));
    }
    w.swap(next);
    while (snap_count > 0 && snap_next <= snap_count &&
           static_cast<double>(s + 1) + 1e-9 >=
               static_cast<double>(steps) * static_cast<double>(snap_next) /
                   static_cast<double>(snap_count)) {
      out.snap_times.push_back(dt * static_cast<double>(s + 1));
      out.snaps.push_back(w);
      ++snap_next;
    }
  }
  out.w = std::move(w);
  out.t_end = t_end;
  return out;
}

std::vector<double> wall_sink(Boundary bnd, const KernelTable& table, std::size_t n) {
  return bnd == Boundary::dirichlet ? std::vector<double>(n, 1.0)
                                    : sink_profile(table, n);
}

}  // namespace

std::optional<SteadyProfile> steady_interval(Boundary bnd, const Kernel& k,
                                             const Reaction& f, double d, double l,
                                             double dx, SteadyStart start) {
  if (!(d > 0.0)) throw std::invalid_argument("steady_interval: d must be positive");
  const auto win = make_window(l, dx, "steady_interval");

  // Existence gate: 0 is the only nonnegative steady state unless the
  // linearization at 0 is unstable.
  auto ev = principal_eigenvalue(bnd, k, d, f.fprime0(), l, dx);
  if (!ev.converged) {
    throw std::runtime_error("steady_interval: eigenvalue solve did not converge");
  }
  if (ev.lambda <= 0.0) return std::nullopt;

  KernelTable table(k, win.dx);
  auto weights = trapezoid_weights(win.n - 1, win.dx);
  auto sink = wall_sink(bnd, table, win.n);
  const std::vector<double> closure(win.n, 0.0);
  const double us = f.u_star();
  const double beta = f.lipschitz_on(us) + d + 1.0;
  auto g = [&](std::size_t, double u) { return f(u); };

  std::vector<double> u0;
  double dir = 1.0;
  if (start == SteadyStart::upper) {
    u0.assign(win.n, us);
  } else {
    dir = -1.0;
    if (ev.phi.size() != win.n) {
      throw std::logic_error("steady_interval: eigenvector grid mismatch");
    }
    // The lower start must be small enough that the very first sweep moves
    // up everywhere, i.e. F(eps*phi) >= 0; otherwise the scale has outrun
    // the range where the linearization dominates, so halve and retry.
    double eps = 1e-3 * us;
    ConvScratch scratch;
    for (int tries = 0;; ++tries) {
      u0.resize(win.n);
      for (std::size_t i = 0; i < win.n; ++i) u0[i] = eps * ev.phi[i];
      auto conv = convolve(table, u0, weights, scratch);
      double worst = 0.0;
      for (std::size_t i = 0; i < win.n; ++i) {
        worst = std::fmin(worst, d * conv[i] - d * sink[i] * u0[i] + f(u0[i]));
      }
      if (worst >= -1e-15 * us) break;
      if (tries >= 80) {
        throw std::runtime_error("steady_interval: no admissible lower start");
      }
      eps *= 0.5;
    }
  }
  return relax(table, l, weights, std::move(u0), d, beta, sink, closure, dir, g,
               "steady_interval");
}

SteadyProfile steady_halfline(const Kernel& k, const Reaction& f, double d,
                              double L, double dx) {
  if (!(d > 0.0)) throw std::invalid_argument("steady_halfline: d must be positive");
  if (!(f.fprime0() > 0.0)) {
    throw std::invalid_argument("steady_halfline: growth rate at 0 must be positive");
  }
  const auto win = make_window(L, dx, "steady_halfline");
  KernelTable table(k, win.dx);
  auto weights = trapezoid_weights(win.n - 1, win.dx);
  const std::vector<double> sink(win.n, 1.0);
  const double us = f.u_star();
  std::vector<double> closure(win.n);
  for (std::size_t i = 0; i < win.n; ++i) {
    closure[i] = d * us * table.tail(L - static_cast<double>(i) * win.dx);
  }
  const double beta = f.lipschitz_on(us) + d + 1.0;
  auto g = [&](std::size_t, double u) { return f(u); };
  auto out = relax(table, L, weights, std::vector<double>(win.n, us), d, beta, sink,
                   closure, 1.0, g, "steady_halfline");
  for (std::size_t i = 0; i + 1 < out.w.size(); ++i) {
    if (out.w[i + 1] < out.w[i] - 1e-10) {
      throw std::runtime_error("steady_halfline: profile not monotone; widen the window");
    }
  }
  return out;
}

SteadyProfile steady_coefficient(const Kernel& k,
                                 const std::function<double(double)>& coeff,
                                 double coeff_inf, double lambda, double d,
                                 double L, double dx) {
  if (!(d > 0.0)) throw std::invalid_argument("steady_coefficient: d must be positive");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("steady_coefficient: lambda must be positive");
  }
  if (!(coeff_inf > 0.0)) {
    throw std::invalid_argument("steady_coefficient: coeff_inf must be positive");
  }
  const auto win = make_window(L, dx, "steady_coefficient");
  std::vector<double> kx(win.n);
  double ksup = coeff_inf;
  double kinf = coeff_inf;
  for (std::size_t i = 0; i < win.n; ++i) {
    kx[i] = coeff(static_cast<double>(i) * win.dx);
    ksup = std::fmax(ksup, kx[i]);
    kinf = std::fmin(kinf, kx[i]);
  }
  if (!(kinf > 0.0)) {
    throw std::invalid_argument("steady_coefficient: coeff must stay positive");
  }
  KernelTable table(k, win.dx);
  auto weights = trapezoid_weights(win.n - 1, win.dx);
  const std::vector<double> sink(win.n, 1.0);
  std::vector<double> closure(win.n);
  for (std::size_t i = 0; i < win.n; ++i) {
    closure[i] =
        d * (coeff_inf / lambda) * table.tail(L - static_cast<double>(i) * win.dx);
  }
  const double beta = d + 2.0 * ksup + 1.0;
  auto g = [&](std::size_t i, double u) { return u * (kx[i] - lambda * u); };
  return relax(table, L, weights, std::vector<double>(win.n, ksup / lambda), d, beta,
               sink, closure, 1.0, g, "steady_coefficient");
}

Evolution evolve_window(Boundary bnd, const Kernel& k, const Reaction& f, double d,
                        const std::function<double(double)>& u0, double L, double dx,
                        double dt, double t_end, std::size_t snap_count) {
  if (!(d > 0.0)) throw std::invalid_argument("evolve_window: d must be positive");
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("evolve_window: dt and t_end must be positive");
  }
  const auto win = make_window(L, dx, "evolve_window");
  std::vector<double> w(win.n);
  double wmax = 0.0;
  for (std::size_t i = 0; i < win.n; ++i) {
    w[i] = u0(static_cast<double>(i) * win.dx);
    if (!(w[i] >= 0.0)) {
      throw std::invalid_argument("evolve_window: initial data must be nonnegative");
    }
    wmax = std::fmax(wmax, w[i]);
  }
  const double lip = f.lipschitz_on(std::fmax(wmax, f.u_star()));
  if (dt > 0.5 / (2.0 * d + lip)) {
    throw std::invalid_argument("evolve_window: dt exceeds 0.5/(2d + Lip f)");
  }
  KernelTable table(k, win.dx);
  auto weights = trapezoid_weights(win.n - 1, win.dx);
  auto sink = wall_sink(bnd, table, win.n);
  auto g = [&](std::size_t, double, double u) { return f(u); };
  return march(table, weights, std::move(w), sink, d, dt, t_end, snap_count, g);
}

Evolution evolve_coefficient(const Kernel& k,
                             const std::function<double(double, double)>& coeff,
                             double coeff_sup, double lambda, double d,
                             const std::function<double(double)>& u0, double L,
                             double dx, double dt, double t_end,
                             std::size_t snap_count) {
  if (!(d > 0.0)) throw std::invalid_argument("evolve_coefficient: d must be positive");
  if (!(lambda > 0.0) || !(coeff_sup > 0.0)) {
    throw std::invalid_argument("evolve_coefficient: lambda and coeff_sup must be positive");
  }
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("evolve_coefficient: dt and t_end must be positive");
  }
  const auto win = make_window(L, dx, "evolve_coefficient");
  std::vector<double> w(win.n);
  double wmax = 0.0;
  for (std::size_t i = 0; i < win.n; ++i) {
    w[i] = u0(static_cast<double>(i) * win.dx);
    if (!(w[i] >= 0.0)) {
      throw std::invalid_argument("evolve_coefficient: initial data must be nonnegative");
    }
    wmax = std::fmax(wmax, w[i]);
  }
  const double range = std::fmax(wmax, coeff_sup / lambda);
  const double lip = coeff_sup + 2.0 * lambda * range;
  if (dt > 0.5 / (2.0 * d + lip)) {
    throw std::invalid_argument(
        "evolve_coefficient: dt exceeds 0.5/(2d + coeff_sup + 2*lambda*range)");
  }
  KernelTable table(k, win.dx);
  auto weights = trapezoid_weights(win.n - 1, win.dx);
  const std::vector<double> sink(win.n, 1.0);
  const double h = win.dx;
  auto g = [&, h](std::size_t i, double t, double u) {
    return u * (coeff(t, static_cast<double>(i) * h) - lambda * u);
  };
  return march(table, weights, std::move(w), sink, d, dt, t_end, snap_count, g);
}

}  // namespace nlfb
