#include "nlfb/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "nlfb/spectral.hpp"

namespace nlfb {
namespace {

// Principal eigenvalue of the occupied interval [0, l]; for two species the
// larger one decides whether the interval sustains growth. The grid is
// capped so long intervals stay cheap.
double terminal_lambda(const ModelSpec& spec, double l) {
  const double dx = std::max(1.0 / 64.0, l / 512.0);
  if (const auto* sc = std::get_if<ScalarSpec>(&spec)) {
    return principal_eigenvalue(sc->boundary, sc->kernel, sc->d,
                                sc->reaction.fprime0(), l, dx)
        .lambda;
  }
  const auto& pp = std::get<PredPreySpec>(spec);
  const double l1 = principal_eigenvalue(Boundary::dirichlet, pp.kernel1,
                                         pp.d1, pp.a1, l, dx)
                        .lambda;
  const double l2 = principal_eigenvalue(Boundary::dirichlet, pp.kernel2,
                                         pp.d2, pp.a2, l, dx)
                        .lambda;
  return std::max(l1, l2);
}

std::string certificate_evidence(const ModelSpec& spec) {
  std::ostringstream os;
  if (const auto* sc = std::get_if<ScalarSpec>(&spec)) {
    if (sc->boundary == Boundary::neumann)
      os << "f'(0) = " << sc->reaction.fprime0()
         << " >= d/2 = " << 0.5 * sc->d;
    else
      os << "f'(0) = " << sc->reaction.fprime0() << " >= d = " << sc->d;
    os << ": growth at zero density beats the dispersal loss on any interval";
    return os.str();
  }
  const auto& pp = std::get<PredPreySpec>(spec);
  if (pp.a1 >= pp.d1)
    os << "a1 = " << pp.a1 << " >= d1 = " << pp.d1;
  else
    os << "a2 = " << pp.a2 << " >= d2 = " << pp.d2;
  os << ": one species outgrows its dispersal loss on any interval";
  return os.str();
}

double initial_sup(const ModelSpec& spec, const InitialData& init,
                   double dx) {
  const FrontState s = make_initial_state(spec, init, dx);
  double sup = 0.0;
  for (const double v : s.u1) sup = std::max(sup, v);
  for (const double v : s.u2) sup = std::max(sup, v);
  return sup;
}

}  // namespace

Outcome classify(const SimConfig& cfg) {
  Outcome out;
  if (spreading_certificate(cfg.model)) {
    out.verdict = "spreading";
    out.evidence = certificate_evidence(cfg.model);
    out.terminal_h = cfg.init.h0;
    out.terminal_sup = initial_sup(cfg.model, cfg.init, cfg.dx);
    out.lambda_at_terminal = terminal_lambda(cfg.model, cfg.init.h0);
    return out;
  }

  const auto thr = spectral_threshold(cfg.model);
  out.threshold = thr.value_or(0.0);
  if (thr && cfg.init.h0 >= *thr) {
    out.verdict = "spreading";
    std::ostringstream os;
    os << "initial front h0 = " << cfg.init.h0
       << " is already at the certifying length " << *thr
       << "; bounded fronts never reach it";
    out.evidence = os.str();
    out.terminal_h = cfg.init.h0;
    out.terminal_sup = initial_sup(cfg.model, cfg.init, cfg.dx);
    out.lambda_at_terminal = terminal_lambda(cfg.model, cfg.init.h0);
    return out;
  }

  SimConfig probe = cfg;
  probe.stop_on_spread = true;
  probe.stop_on_vanish = true;
  if (probe.spread_h == 0.0)
    probe.spread_h = thr ? *thr + cfg.spread_margin : -1.0;
  const Trajectory traj = run(probe);

  out.simulated = true;
  out.verdict = traj.hint;
  out.evidence = traj.stop_reason;
  out.terminal_h = traj.h.back();
  out.terminal_sup = traj.sup.back();
  out.lambda_at_terminal = terminal_lambda(cfg.model, traj.h.back());
  return out;
}

CriticalMu critical_mu(const SimConfig& cfg, double rel_tol,
                       double mu2_ratio) {
  if (!(rel_tol > 0.0))
    throw std::invalid_argument("critical_mu: rel_tol must be positive");
  if (!(mu2_ratio > 0.0))
    throw std::invalid_argument("critical_mu: mu2_ratio must be positive");
  if (spreading_certificate(cfg.model))
    throw std::invalid_argument(
        "critical_mu: the growth certificate makes every mu spread");
  const auto thr = spectral_threshold(cfg.model);
  if (!thr)
    throw std::invalid_argument(
        "critical_mu: growth at zero density is nonpositive, so no mu can "
        "flip the verdict");
  if (cfg.init.h0 >= *thr)
    throw std::invalid_argument(
        "critical_mu: the initial front is already past the certifying "
        "length, so every mu spreads");

  SimConfig probe = cfg;
  probe.stop_on_spread = true;
  probe.stop_on_vanish = true;
  probe.spread_h = *thr + cfg.spread_margin;
  probe.snapshot_count = 1;

  CriticalMu result;
  auto spreads_at = [&](double mu) {
    if (auto* sc = std::get_if<ScalarSpec>(&probe.model)) {
      sc->mu = mu;
    } else {
      auto& pp = std::get<PredPreySpec>(probe.model);
      pp.mu1 = mu;
      pp.mu2 = mu2_ratio * mu;
    }
    ++result.probes;
    const Trajectory traj = run(probe);
    if (traj.hint == "spreading") return true;
    if (traj.hint == "vanishing") return false;
    std::ostringstream os;
    os << "critical_mu: undecided at mu=" << mu << " within t_max="
       << probe.t_max << "; raise the budget";
    throw std::runtime_error(os.str());
  };

  double lo = 1.0, hi = 1.0;
  if (spreads_at(1.0)) {
    lo = 0.5;
    while (spreads_at(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-12)
        throw std::runtime_error(
            "critical_mu: still spreading at mu=1e-12; no vanishing end");
    }
  } else {
    hi = 2.0;
    while (!spreads_at(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12)
        throw std::runtime_error(
            "critical_mu: still vanishing at mu=1e12; no spreading end");
    }
  }
  while (hi - lo > rel_tol * lo) {
    const double mid = std::sqrt(lo * hi);
    (spreads_at(mid) ? hi : lo) = mid;
  }
  result.mu_lo = lo;
  result.mu_hi = hi;
  result.mu_star = std::sqrt(lo * hi);
  return result;
}

}  // namespace nlfb
