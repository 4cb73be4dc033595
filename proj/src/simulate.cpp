#include "nlfb/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "nlfb/grid.hpp"
#include "nlfb/nonlocal.hpp"
#include "nlfb/spectral.hpp"

namespace nlfb {
namespace {

// Number of nodes x_i = i*dx with x_i < h (the last one has h in its cell).
std::size_t node_count(double h, double dx) {
  return static_cast<std::size_t>(std::ceil(h / dx - 1e-12));
}

[[noreturn]] void abort_with_dump(const char* what, double t, double h,
                                  std::size_t i, double dx, double v) {
  std::ostringstream os;
  os << what << ": t=" << t << ", h=" << h << ", node " << i
     << " (x=" << static_cast<double>(i) * dx << ", u=" << v
     << "); the time step is too large for this configuration";
  throw std::runtime_error(os.str());
}

// Zeroes rounding noise in [-1e-14, 0); aborts on real negativity, NaN or
// overflow, which under the stability bound can only mean divergence.
inline double clamped(double v, double t, double h, std::size_t i, double dx) {
  if (!(v >= 0.0)) {
    if (std::isnan(v) || v < -1e-14)
      abort_with_dump("non-physical density", t, h, i, dx, v);
    return 0.0;
  }
  if (std::isinf(v)) abort_with_dump("non-finite density", t, h, i, dx, v);
  return v;
}

class Runner {
 public:
  virtual ~Runner() = default;
  virtual void advance(FrontState& s, double dt) = 0;
  /// Largest stable dt: half of 1/(2*d_max + Lip f on the invariant box).
  virtual double dt_limit() const = 0;
  /// A-priori sup bounds (max of the initial sup and the carrying value).
  virtual double bound1() const = 0;
  virtual double bound2() const = 0;
  /// Tolerance for the sup-bound check. Exactly normalized lattices keep the
  /// comparison structural (rounding only); raw heavy-tail lattices carry an
  /// O(dx^2) mass excess, and the neumann wall sink is matched only to
  /// quadrature accuracy for kernels with curvature at the wall.
  virtual double bound_slack() const = 0;
  /// Upper bound on all future front travel once the density is below sup
  /// everywhere and the interval [0, lbar] keeps it decaying: flux never
  /// exceeds sup * (sum of mu_i * min(first moment, lbar/2)) and the decay
  /// rate is the principal eigenvalue at lbar. Returns +inf when that
  /// eigenvalue is not safely negative. Used to certify vanishing long
  /// before the density hits stall tolerances (near-critical decay is
  /// arbitrarily slow, an honest property of the dynamics).
  virtual double future_travel(double lbar, double sup) = 0;
};

// Shared cache so future_travel recomputes its eigenvalue only when the test
// length actually moved.
struct DecayCache {
  double lbar = -1.0;
  double lambda = 0.0;

  template <typename F>
  double rate(double lbar_now, F&& solve) {
    if (lbar < 0.0 || std::fabs(lbar_now - lbar) > 1e-4 * lbar_now) {
      lambda = solve(lbar_now);
      lbar = lbar_now;
    }
    return lambda;
  }
};

class ScalarRunner final : public Runner {
 public:
  ScalarRunner(const ScalarSpec& spec, const FrontState& s0)
      : spec_(spec), table_(spec.kernel, s0.dx), dx_(s0.dx) {
    bound_ = spec_.reaction.u_star();
    for (double v : s0.u1) bound_ = std::max(bound_, v);
    lip_ = spec_.reaction.lipschitz_on(bound_);
    grow_sink(node_count(s0.h, dx_));
  }

  double dt_limit() const override { return 0.5 / (2.0 * spec_.d + lip_); }
  double bound1() const override { return bound_; }
  double bound2() const override { return 0.0; }
  double bound_slack() const override {
    if (!spec_.kernel.first_moment_finite()) return 2e-2 * (1.0 + bound_);
    return spec_.boundary == Boundary::neumann ? 1e-4 * (1.0 + bound_)
                                               : 1e-10 * (1.0 + bound_);
  }

  double future_travel(double lbar, double sup) override {
    const double lam = cache_.rate(lbar, [&](double l) {
      return principal_eigenvalue(spec_.boundary, spec_.kernel, spec_.d,
                                  spec_.reaction.fprime0(), l, 1.0 / 32.0)
          .lambda;
    });
    if (!(lam < -1e-12)) return std::numeric_limits<double>::infinity();
    const double per_unit =
        spec_.mu * std::min(spec_.kernel.first_moment(), 0.5 * lbar);
    return 2.0 * sup * per_unit / -lam;
  }

  void advance(FrontState& s, double dt) override {
    const std::size_t m = s.u1.size();
    update_front_weights(w_, m, dx_, s.h);
    const auto conv = convolve(table_, s.u1, w_, scratch_);
    const double flux =
        boundary_flux_weighted(table_, s.u1, w_, s.h, spec_.mu);
    const double d = spec_.d;
    const bool neumann = spec_.boundary == Boundary::neumann;
    for (std::size_t i = 0; i < m; ++i) {
      const double ui = s.u1[i];
      const double sink = neumann ? sink_[i] : 1.0;
      const double v =
          ui + dt * (d * conv[i] - d * sink * ui + spec_.reaction(ui));
      s.u1[i] = clamped(v, s.t, s.h, i, dx_);
    }
    s.h += dt * flux;
    s.t += dt;
    const std::size_t grown = node_count(s.h, dx_);
    if (grown > m) {
      s.u1.resize(grown, 0.0);
      grow_sink(grown);
    }
  }

 private:
  void grow_sink(std::size_t m) {
    if (spec_.boundary != Boundary::neumann) return;
    for (std::size_t i = sink_.size(); i < m; ++i)
      sink_.push_back(table_.sink(static_cast<double>(i) * dx_));
  }

  ScalarSpec spec_;
  KernelTable table_;
  double dx_ = 0.0;
  double bound_ = 0.0;
  double lip_ = 0.0;
  std::vector<double> w_, sink_;
  ConvScratch scratch_;
  DecayCache cache_;
};

class PairRunner final : public Runner {
 public:
  PairRunner(const PredPreySpec& spec, const FrontState& s0)
      : spec_(spec),
        table1_(spec.kernel1, s0.dx),
        table2_(spec.kernel2, s0.dx),
        dx_(s0.dx) {
    double sup1 = 0.0, sup2 = 0.0;
    for (double v : s0.u1) sup1 = std::max(sup1, v);
    for (double v : s0.u2) sup2 = std::max(sup2, v);
    bound1_ = spec_.prey_bound(sup1);
    bound2_ = spec_.predator_bound(sup2, bound1_);
    lip_ = std::max(
        spec_.a1 + 2.0 * spec_.b1 * bound1_ + spec_.c1 * bound2_,
        spec_.a2 + 2.0 * spec_.b2 * bound2_ + spec_.c2 * bound1_);
  }

  double dt_limit() const override {
    return 0.5 / (2.0 * std::max(spec_.d1, spec_.d2) + lip_);
  }
  double bound1() const override { return bound1_; }
  double bound2() const override { return bound2_; }
  double bound_slack() const override {
    const bool exact = spec_.kernel1.first_moment_finite() &&
                       spec_.kernel2.first_moment_finite();
    const double b = std::max(bound1_, bound2_);
    return exact ? 1e-10 * (1.0 + b) : 2e-2 * (1.0 + b);
  }

  double future_travel(double lbar, double sup) override {
    const double lam = cache_.rate(lbar, [&](double l) {
      const double l1 = principal_eigenvalue(Boundary::dirichlet, spec_.kernel1,
                                             spec_.d1, spec_.a1, l, 1.0 / 32.0)
                            .lambda;
      const double l2 = principal_eigenvalue(Boundary::dirichlet, spec_.kernel2,
                                             spec_.d2, spec_.a2, l, 1.0 / 32.0)
                            .lambda;
      return std::max(l1, l2);
    });
    if (!(lam < -1e-12)) return std::numeric_limits<double>::infinity();
    const double per_unit =
        spec_.mu1 * std::min(spec_.kernel1.first_moment(), 0.5 * lbar) +
        spec_.mu2 * std::min(spec_.kernel2.first_moment(), 0.5 * lbar);
    // The prey feeds the predator linearly, so its decay carries a
    // polynomial correction bounded by the extra factor.
    return 2.0 * sup * per_unit / -lam * (1.0 + spec_.c2 / -lam);
  }

  void advance(FrontState& s, double dt) override {
    const std::size_t m = s.u1.size();
    update_front_weights(w_, m, dx_, s.h);
    const auto conv1 = convolve(table1_, s.u1, w_, scratch1_);
    const auto conv2 = convolve(table2_, s.u2, w_, scratch2_);
    const double flux =
        boundary_flux_weighted(table1_, s.u1, w_, s.h, spec_.mu1) +
        boundary_flux_weighted(table2_, s.u2, w_, s.h, spec_.mu2);
    for (std::size_t i = 0; i < m; ++i) {
      const double x1 = s.u1[i], x2 = s.u2[i];
      const double v1 =
          x1 + dt * (spec_.d1 * (conv1[i] - x1) +
                     x1 * (spec_.a1 - spec_.b1 * x1 - spec_.c1 * x2));
      const double v2 =
          x2 + dt * (spec_.d2 * (conv2[i] - x2) +
                     x2 * (spec_.a2 - spec_.b2 * x2 + spec_.c2 * x1));
      s.u1[i] = clamped(v1, s.t, s.h, i, dx_);
      s.u2[i] = clamped(v2, s.t, s.h, i, dx_);
    }
    s.h += dt * flux;
    s.t += dt;
    const std::size_t grown = node_count(s.h, dx_);
    if (grown > m) {
      s.u1.resize(grown, 0.0);
      s.u2.resize(grown, 0.0);
    }
  }

 private:
  PredPreySpec spec_;
  KernelTable table1_, table2_;
  double dx_ = 0.0;
  double bound1_ = 0.0, bound2_ = 0.0;
  double lip_ = 0.0;
  std::vector<double> w_;
  ConvScratch scratch1_, scratch2_;
  DecayCache cache_;
};

std::unique_ptr<Runner> make_runner(const ModelSpec& spec,
                                    const FrontState& s0) {
  if (s0.u1.empty() || !(s0.dx > 0.0) || !(s0.h > 0.0))
    throw std::invalid_argument("simulate: state needs h > 0, dx > 0 and at least one node");
  if (!s0.u2.empty() && s0.u2.size() != s0.u1.size())
    throw std::invalid_argument("simulate: species arrays differ in length");
  if (const auto* sc = std::get_if<ScalarSpec>(&spec)) {
    if (s0.two_species())
      throw std::invalid_argument("simulate: scalar model given a two-species state");
    return std::make_unique<ScalarRunner>(*sc, s0);
  }
  const auto& pp = std::get<PredPreySpec>(spec);
  if (!s0.two_species())
    throw std::invalid_argument("simulate: two-species model needs u2 samples");
  return std::make_unique<PairRunner>(pp, s0);
}

double interp_series(const std::vector<double>& t, const std::vector<double>& y,
                     double at) {
  const auto it = std::lower_bound(t.begin(), t.end(), at);
  if (it == t.begin()) return y.front();
  if (it == t.end()) return y.back();
  const std::size_t j = static_cast<std::size_t>(it - t.begin());
  const double span = t[j] - t[j - 1];
  const double a = span > 0.0 ? (at - t[j - 1]) / span : 1.0;
  return y[j - 1] + a * (y[j] - y[j - 1]);
}

}  // namespace

FrontState make_initial_state(const ModelSpec& spec, const InitialData& init,
                              double dx) {
  if (!(dx > 0.0))
    throw std::invalid_argument("make_initial_state: dx must be positive");
  require_usable(spec, init);
  FrontState s;
  s.dx = dx;
  s.h = init.h0;
  const std::size_t m = node_count(init.h0, dx);
  s.u1.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    s.u1[i] = init.u1(static_cast<double>(i) * dx, init.h0);
  if (std::holds_alternative<PredPreySpec>(spec)) {
    const InitialProfile& p2 = *init.u2;
    s.u2.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      s.u2[i] = p2(static_cast<double>(i) * dx, init.h0);
  }
  return s;
}

FrontState step(const ModelSpec& spec, const FrontState& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  auto runner = make_runner(spec, s);
  if (dt > runner->dt_limit() * (1.0 + 1e-12))
    throw std::invalid_argument(
        "step: dt exceeds the stability bound 0.5/(2*d + Lip f)");
  FrontState next = s;
  runner->advance(next, dt);
  return next;
}

bool spreading_certificate(const ModelSpec& spec) {
  if (const auto* sc = std::get_if<ScalarSpec>(&spec)) {
    const double a0 = sc->reaction.fprime0();
    return sc->boundary == Boundary::neumann ? a0 >= 0.5 * sc->d
                                             : a0 >= sc->d;
  }
  const auto& pp = std::get<PredPreySpec>(spec);
  return pp.a1 >= pp.d1 || pp.a2 >= pp.d2;
}

std::optional<double> spectral_threshold(const ModelSpec& spec, double dx) {
  if (spreading_certificate(spec)) return std::nullopt;
  if (const auto* sc = std::get_if<ScalarSpec>(&spec)) {
    if (sc->reaction.fprime0() <= 0.0) return std::nullopt;
    return critical_length(sc->boundary, sc->kernel, sc->d,
                           sc->reaction.fprime0(), dx);
  }
  const auto& pp = std::get<PredPreySpec>(spec);
  const auto l1 = critical_length(Boundary::dirichlet, pp.kernel1, pp.d1, pp.a1, dx);
  const auto l2 = critical_length(Boundary::dirichlet, pp.kernel2, pp.d2, pp.a2, dx);
  if (!l1 && !l2) return std::nullopt;
  if (!l1) return l2;
  if (!l2) return l1;
  return std::min(*l1, *l2);
}

Trajectory run(const SimConfig& cfg) {
  if (!(cfg.t_max > 0.0))
    throw std::invalid_argument("run: t_max must be positive");
  FrontState s = make_initial_state(cfg.model, cfg.init, cfg.dx);
  auto runner = make_runner(cfg.model, s);

  const double limit = runner->dt_limit();
  double dt = cfg.dt > 0.0 ? cfg.dt : 0.5 * limit;
  if (dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument(
        "run: dt exceeds the stability bound 0.5/(2*d + Lip f)");
  const auto steps =
      static_cast<std::size_t>(std::ceil(cfg.t_max / dt - 1e-9));
  dt = cfg.t_max / static_cast<double>(steps);

  const std::size_t stride =
      cfg.series_stride
          ? cfg.series_stride
          : std::max<std::size_t>(
                1, static_cast<std::size_t>(0.1 / dt + 1e-9));
  const auto lookback = static_cast<std::size_t>(
      std::ceil(cfg.stall_window / (static_cast<double>(stride) * dt) - 1e-9));

  Trajectory traj;
  traj.dx = cfg.dx;
  traj.dt = dt;
  traj.certificate = spreading_certificate(cfg.model);
  double threshold = cfg.spread_h;
  if (threshold == 0.0 && !traj.certificate) {
    const auto l = spectral_threshold(cfg.model);
    threshold = l ? *l + cfg.spread_margin : -1.0;
  }
  traj.spread_threshold = threshold > 0.0 ? threshold : 0.0;

  const double cap1 = runner->bound1() + runner->bound_slack();
  const double cap2 = runner->bound2() + runner->bound_slack();
  double checked_h = s.h;
  auto check_invariants = [&](const FrontState& st) {
    if (!std::isfinite(st.h) || st.h < checked_h)
      throw std::runtime_error("run: front position lost monotonicity");
    checked_h = st.h;
    for (std::size_t i = 0; i < st.u1.size(); ++i) {
      if (!(st.u1[i] <= cap1))
        abort_with_dump("density exceeded its a-priori bound", st.t, st.h, i,
                        st.dx, st.u1[i]);
    }
    for (std::size_t i = 0; i < st.u2.size(); ++i) {
      if (!(st.u2[i] <= cap2))
        abort_with_dump("density exceeded its a-priori bound", st.t, st.h, i,
                        st.dx, st.u2[i]);
    }
  };

  auto record = [&](const FrontState& st) {
    double sup = 0.0, mass = 0.0;
    const auto w = front_weights(st.u1.size(), st.dx, st.h);
    for (std::size_t i = 0; i < st.u1.size(); ++i) {
      double v = st.u1[i];
      if (!st.u2.empty()) {
        sup = std::max(sup, st.u2[i]);
        v += st.u2[i];
      }
      sup = std::max(sup, st.u1[i]);
      mass += w[i] * v;
    }
    traj.t.push_back(st.t);
    traj.h.push_back(st.h);
    traj.sup.push_back(sup);
    traj.mass.push_back(mass);
  };

  const std::size_t snaps = std::max<std::size_t>(1, cfg.snapshot_count);
  std::size_t next_snap = 0;
  auto take_snapshots = [&](const FrontState& st) {
    while (next_snap <= snaps &&
           st.t + 1e-9 * cfg.t_max >=
               cfg.t_max * static_cast<double>(next_snap) /
                   static_cast<double>(snaps)) {
      traj.snapshots.push_back(st);
      ++next_snap;
    }
  };

  record(s);
  take_snapshots(s);

  const double lstar = threshold > 0.0 ? threshold - cfg.spread_margin : -1.0;
  bool vanish_certified = false;
  double spread_t = -1.0;
  std::string stop;
  for (std::size_t step_i = 1; step_i <= steps; ++step_i) {
    runner->advance(s, dt);
    if (threshold > 0.0 && spread_t < 0.0 && s.h >= threshold) {
      spread_t = s.t;
      if (cfg.stop_on_spread) {
        record(s);
        std::ostringstream os;
        os << "front reached " << s.h << " >= threshold " << threshold
           << " at t=" << s.t;
        stop = os.str();
        break;
      }
    }
    if (step_i % stride == 0 || step_i == steps) {
      record(s);
      const std::size_t j = traj.t.size() - 1;
      if (cfg.stop_on_vanish && traj.sup[j] < cfg.eps_vanish) {
        if (j >= lookback &&
            traj.h[j] - traj.h[j - lookback] < cfg.eps_stall) {
          std::ostringstream os;
          os << "sup u = " << traj.sup[j] << " < " << cfg.eps_vanish
             << " with the front stalled since t=" << traj.t[j - lookback];
          stop = os.str();
          break;
        }
        // Near-threshold decay is arbitrarily slow, so also accept a
        // rigorous parking certificate: a test length that keeps the
        // density decaying and provably out-reaches all remaining travel.
        if (lstar > 0.0 && s.h < lstar) {
          const double lbar = 0.5 * (s.h + lstar);
          const double travel = runner->future_travel(lbar, traj.sup[j]);
          if (s.h + travel < lbar) {
            vanish_certified = true;
            std::ostringstream os;
            os << "sup u = " << traj.sup[j] << " < " << cfg.eps_vanish
               << " and future front travel <= " << travel
               << " can never reach the decaying length " << lbar;
            stop = os.str();
            break;
          }
        }
      }
    }
    if (step_i % 100 == 0) check_invariants(s);
    take_snapshots(s);
  }
  check_invariants(s);
  if (traj.t.empty() || traj.t.back() != s.t) record(s);
  if (traj.snapshots.empty() || traj.snapshots.back().t != s.t)
    traj.snapshots.push_back(s);

  const std::size_t last = traj.t.size() - 1;
  const bool spread_seen = threshold > 0.0 && traj.h[last] >= threshold;
  bool vanish_seen = vanish_certified;
  if (traj.sup[last] < cfg.eps_vanish && last >= lookback &&
      traj.h[last] - traj.h[last - lookback] < cfg.eps_stall)
    vanish_seen = true;

  std::ostringstream why;
  if (traj.certificate) {
    traj.hint = "spreading";
    why << "low-density growth beats dispersal loss on any interval, so "
           "every front spreads";
  } else if (spread_seen) {
    traj.hint = "spreading";
    why << "front crossed the certifying length " << threshold << " at t="
        << spread_t;
  } else if (vanish_seen) {
    traj.hint = "vanishing";
    if (vanish_certified)
      why << "sup u = " << traj.sup[last] << " < " << cfg.eps_vanish
          << " with all future front travel provably short of a decaying "
             "length";
    else
      why << "sup u = " << traj.sup[last] << " < " << cfg.eps_vanish
          << " and the front gained < " << cfg.eps_stall << " over the last "
          << cfg.stall_window << " time units";
  } else {
    traj.hint = "undecided";
    why << "budget exhausted at t=" << traj.t[last] << " with h="
        << traj.h[last] << " and sup u=" << traj.sup[last];
  }
  if (!stop.empty())
    why << " (stopped early: " << stop << ")";
  else if (traj.hint != "undecided")
    why << "; the run continued to t=" << traj.t[last];
  traj.stop_reason = why.str();
  return traj;
}

SpeedEstimate front_speed(const Trajectory& traj, double window_frac) {
  if (!(window_frac > 0.0) || window_frac > 1.0)
    throw std::invalid_argument("front_speed: window_frac must be in (0, 1]");
  const std::size_t n = traj.t.size();
  const auto take = static_cast<std::size_t>(window_frac * static_cast<double>(n));
  if (take < 10)
    throw std::invalid_argument(
        "front_speed: trailing window has fewer than 10 samples");
  const std::size_t start = n - take;
  double tm = 0.0, hm = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    tm += traj.t[i];
    hm += traj.h[i];
  }
  tm /= static_cast<double>(take);
  hm /= static_cast<double>(take);
  double cov = 0.0, var = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const double dtc = traj.t[i] - tm;
    cov += dtc * (traj.h[i] - hm);
    var += dtc * dtc;
  }
  SpeedEstimate est;
  est.slope = cov / var;
  est.secant = traj.h.back() / traj.t.back();
  est.window_samples = take;
  return est;
}

AccelerationReport acceleration_probe(const Trajectory& traj, double t0) {
  if (traj.t.size() < 2 || !(traj.t.back() > 0.0))
    throw std::invalid_argument("acceleration_probe: trajectory too short");
  const double tf = traj.t.back();
  const double base = t0 > 0.0 ? t0 : tf / 8.0;
  AccelerationReport rep;
  for (double tc = base; tc <= tf * (1.0 + 1e-9); tc *= 2.0)
    rep.times.push_back(std::min(tc, tf));
  if (rep.times.size() < 4)
    throw std::invalid_argument(
        "acceleration_probe: need at least four dyadic checkpoints");
  for (const double tc : rep.times)
    rep.speeds.push_back(interp_series(traj.t, traj.h, tc) / tc);
  for (std::size_t k = 0; k + 1 < rep.speeds.size(); ++k)
    rep.ratios.push_back(rep.speeds[k + 1] / rep.speeds[k]);
  bool accel = true, linear = true;
  for (std::size_t k = rep.ratios.size() - 3; k < rep.ratios.size(); ++k) {
    accel = accel && rep.ratios[k] >= 1.15;
    linear = linear && rep.ratios[k] >= 0.98 && rep.ratios[k] <= 1.05;
  }
  rep.flag = accel ? "accelerating" : linear ? "linear" : "inconclusive";
  return rep;
}

}  // namespace nlfb
