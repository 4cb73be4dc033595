#include "nlfb/semiwave.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nlfb/grid.hpp"
#include "nlfb/nonlocal.hpp"

namespace nlfb {
namespace {

constexpr double kMarchTol = 1e-12;  // per-step sup-change that ends the march
constexpr std::size_t kMarchCap = 2000000;
constexpr double kSpeedTol = 1e-8;  // bisection width in c

/// Marching workspace for one window [-M, 0]: nodes x_i = -M + i*dx with
/// i = 0..cells, the last node pinned to phi = 0.
class ProfileSolver {
 public:
  ProfileSolver(const Kernel& k, const Reaction& f, double d, double M,
                double dx_req)
      : M_(checked_window(M)),
        dx_(effective_dx(M_, dx_req)),
        table_(k, dx_),
        f_(f),
        d_(d) {
    if (!(d > 0.0)) throw std::invalid_argument("semi-wave: d must be positive");
    cells_ = static_cast<std::size_t>(std::llround(M_ / dx_));
    us_ = f.u_star();
    lip_ = f.lipschitz_on(us_);
    w_ = trapezoid_weights(cells_, dx_);
    closure_.resize(cells_ + 1);
    flux_tail_.resize(cells_ + 1);
    for (std::size_t i = 0; i <= cells_; ++i) {
      const double xi = static_cast<double>(i) * dx_;
      closure_[i] = d * us_ * table_.tail(xi);       // mass entering from x < -M
      flux_tail_[i] = table_.tail(M_ - xi);          // escape tail T(-x_i)
    }
  }

  double spacing() const { return dx_; }
  std::size_t nodes() const { return cells_ + 1; }
  double plateau_gap(const std::vector<double>& phi) const {
    return us_ - phi[cells_ / 2];  // u* - phi(-M/2)
  }

  /// Pseudo-time march at speed c from the current contents of phi (resized
  /// and ramp-initialized when the size does not match the window). Returns
  /// the sup-norm residual of the profile equation at the settled state.
  double march(double c, std::vector<double>& phi) {
    if (!(c >= 0.0)) throw std::invalid_argument("semi-wave: speed must be nonnegative");
    if (phi.size() != cells_ + 1) {
      phi.resize(cells_ + 1);
      for (std::size_t i = 0; i <= cells_; ++i) {
        phi[i] = us_ * (M_ - static_cast<double>(i) * dx_) / M_;
      }
      phi[cells_] = 0.0;
    }
    const double dtau = 0.4 * dx_ / (c + (2.0 * d_ + lip_) * dx_);
    std::vector<double> next(cells_ + 1);
    for (std::size_t step = 0; step < kMarchCap; ++step) {
      auto conv = convolve(table_, phi, w_, scratch_);
      for (std::size_t i = 0; i < cells_; ++i) {
        const double F = d_ * conv[i] + closure_[i] - d_ * phi[i] +
                         c * (phi[i + 1] - phi[i]) / dx_ + f_(phi[i]);
        next[i] = std::clamp(phi[i] + dtau * F, 0.0, us_);
      }
      next[cells_] = 0.0;
      for (std::size_t i = cells_; i-- > 0;) {
        if (next[i] < next[i + 1]) next[i] = next[i + 1];
      }
      double change = 0.0;
      for (std::size_t i = 0; i <= cells_; ++i) {
        change = std::fmax(change, std::fabs(next[i] - phi[i]));
      }
      phi.swap(next);
      if (change < kMarchTol) return residual(c, phi);
    }
    throw std::runtime_error("semi-wave: profile marching did not converge");
  }

  /// Sup-norm of the stationary equation over the interior nodes.
  double residual(double c, const std::vector<double>& phi) {
    auto conv = convolve(table_, phi, w_, scratch_);
    double r = 0.0;
    for (std::size_t i = 0; i < cells_; ++i) {
      r = std::fmax(r, std::fabs(d_ * conv[i] + closure_[i] - d_ * phi[i] +
                                 c * (phi[i + 1] - phi[i]) / dx_ + f_(phi[i])));
    }
    return r;
  }

  /// Flux integral int phi(x) T(-x) dx over (-inf, 0], far field u* * S(M).
  double flux(const std::vector<double>& phi) const {
    double acc = 0.0;
    for (std::size_t i = 0; i <= cells_; ++i) acc += w_[i] * phi[i] * flux_tail_[i];
    return acc + us_ * table_.kernel().tail_integral(M_);
  }

 private:
  static double checked_window(double M) {
    if (!(M > 0.0) || !std::isfinite(M)) {
      throw std::invalid_argument("semi-wave: window must be positive and finite");
    }
    return M;
  }
  static double effective_dx(double M, double dx_req) {
    if (!(dx_req > 0.0)) throw std::invalid_argument("semi-wave: dx must be positive");
    const auto cells = std::max<long long>(32, std::llround(M / dx_req));
    return M / static_cast<double>(cells);
  }

  double M_;
  double dx_;
  KernelTable table_;
  Reaction f_;
  double d_;
  std::size_t cells_ = 0;
  double us_ = 0.0;
  double lip_ = 0.0;
  std::vector<double> w_;
  std::vector<double> closure_;
  std::vector<double> flux_tail_;
  ConvScratch scratch_;
};

struct Sample {
  double c = 0.0;
  double g = 0.0;
};

/// Leftmost sign change of g over [lo, hi] by a coarse scan, refined with
/// false position. Fallback for the (unexpected) case that the sampled flux
/// balance is not monotone in c.
template <typename Eval>
double scan_root(Eval&& g, double lo, double hi) {
  const int cells = 64;
  double a = lo, ga = g(lo);
  for (int j = 1; j <= cells; ++j) {
    const double b = lo + (hi - lo) * static_cast<double>(j) / cells;
    const double gb = g(b);
    if (ga > 0.0 && gb <= 0.0) {
      double x0 = a, g0 = ga, x1 = b, g1 = gb;
      for (int it = 0; it < 200 && x1 - x0 > kSpeedTol; ++it) {
        double m = x1 - g1 * (x1 - x0) / (g1 - g0);
        m = std::clamp(m, x0 + 0.1 * (x1 - x0), x1 - 0.1 * (x1 - x0));
        const double gm = g(m);
        if (gm > 0.0) {
          x0 = m;
          g0 = gm;
        } else {
          x1 = m;
          g1 = gm;
        }
      }
      return 0.5 * (x0 + x1);
    }
    a = b;
    ga = gb;
  }
  throw std::runtime_error("semi-wave: flux balance never changes sign");
}

}  // namespace

std::vector<double> profile_for_speed(const Kernel& k, const Reaction& f, double d,
                                      double c, double M, double dx) {
  ProfileSolver solver(k, f, d, M, dx);
  std::vector<double> phi;
  solver.march(c, phi);
  return phi;
}

SemiWave solve_semiwave(const Kernel& k, const Reaction& f, double d, double mu,
                        double M, double dx) {
  if (!k.first_moment_finite()) {
    throw std::domain_error("solve_semiwave: no finite semi-wave speed");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("solve_semiwave: mu must be positive");

  for (int grow = 0;; ++grow) {
    ProfileSolver solver(k, f, d, M, dx);
    std::vector<double> phi;
    double res = 0.0;
    std::vector<Sample> samples;
    auto g = [&](double c) {
      res = solver.march(c, phi);
      const double val = mu * solver.flux(phi) - c;
      samples.push_back({c, val});
      return val;
    };

    // Sign-change bracket around an O(1) guess, grown by doubling. The flux
    // balance is positive as c -> 0+ and eventually loses to -c.
    double lo = 1.0, hi = 1.0;
    double glo = g(lo);
    if (glo > 0.0) {
      hi = 2.0;
      while (g(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9) throw std::runtime_error("solve_semiwave: no upper bracket");
      }
    } else {
      lo = 0.5;
      while ((glo = g(lo)) <= 0.0) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-12) throw std::runtime_error("solve_semiwave: no lower bracket");
      }
    }
    const double lo0 = lo, hi0 = hi;
    while (hi - lo > kSpeedTol) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double c0 = 0.5 * (lo + hi);

    // Bisection assumed one root; check the samples actually decreased in c
    // (ignoring pairs too close for the marching noise floor) and fall back
    // to a scan when they did not.
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.c < b.c; });
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (samples[i + 1].c - samples[i].c >= 1e-6 &&
          samples[i + 1].g > samples[i].g + 1e-7) {
        monotone = false;
        break;
      }
    }
    if (!monotone) c0 = scan_root(g, lo0, hi0);

    res = solver.march(c0, phi);
    const double gap = std::fabs(mu * solver.flux(phi) - c0);
    if (solver.plateau_gap(phi) < 1e-6) {
      SemiWave out;
      out.c0 = c0;
      out.phi = std::move(phi);
      out.M = M;
      out.dx = solver.spacing();
      out.residual = res;
      out.flux_gap = gap;
      return out;
    }
    if (grow >= 4) {
      throw std::runtime_error("solve_semiwave: window never captured the plateau");
    }
    M *= 2.0;
  }
}

SpeedPair lotka_volterra_speeds(const PredPreySpec& spec, double M, double dx) {
  SpeedPair out;
  out.prey = solve_semiwave(spec.kernel1, Reaction::logistic(spec.a1, spec.b1),
                            spec.d1, spec.mu1, M, dx);
  out.predator = solve_semiwave(
      spec.kernel2,
      Reaction::logistic(spec.a2 + spec.c2 * spec.a1 / spec.b1, spec.b2), spec.d2,
      spec.mu2, M, dx);
  return out;
}

}  // namespace nlfb
