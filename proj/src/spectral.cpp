#include "nlfb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "nlfb/grid.hpp"
#include "nlfb/linalg.hpp"
#include "nlfb/nonlocal.hpp"
#include "nlfb/simd.hpp"

namespace nlfb {
namespace {

constexpr double kResidualFactor = 1e-10;  // target: residual <= factor * ||A||_inf
constexpr std::size_t kPowerCap = 50000;
constexpr std::size_t kPowerStall = 256;   // hand over to inverse iteration after this

/// Discrete operator A on the n-node grid, applied through the banded
/// convolution; also assembles sigma*I - A into a band or dense factorization
/// for the inverse-iteration refinement.
class EigenOperator {
 public:
  EigenOperator(Boundary bnd, const Kernel& k, double d, double a0, double l,
                double dx_req)
      : table_(k, effective_dx(l, dx_req)), d_(d) {
    dx_ = table_.dx();
    n_ = static_cast<std::size_t>(std::llround(l / dx_)) + 1;
    band_ = std::min(table_.band_limit(), n_ - 1);
    table_.ensure_taps(band_);
    w_ = trapezoid_weights(n_ - 1, dx_);
    diag_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double s = bnd == Boundary::dirichlet ? 1.0 : table_.sink(i * dx_);
      diag_[i] = a0 - d * s;
    }
    pad_.resize(n_ + 2 * band_);
  }

  std::size_t size() const { return n_; }
  double spacing() const { return dx_; }
  const std::vector<double>& weights() const { return w_; }

  void apply(const double* x, double* y) const {
    std::fill(pad_.begin(), pad_.end(), 0.0);
    double* v = pad_.data() + band_;
    for (std::size_t i = 0; i < n_; ++i) v[i] = w_[i] * x[i];
    simd::ops().band_sym_matvec(table_.taps().data(), band_, pad_.data(), n_, y);
    for (std::size_t i = 0; i < n_; ++i) y[i] = d_ * y[i] + diag_[i] * x[i];
  }

  /// Weighted Rayleigh quotient <v, Av>_w / <v, v>_w; diag(w) symmetrizes A.
  double rayleigh(const std::vector<double>& v, const std::vector<double>& av) const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      num += w_[i] * v[i] * av[i];
      den += w_[i] * v[i] * v[i];
    }
    return num / den;
  }

  double norm_inf() const {
    auto rows = band_row_sums(w_);
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double diag_entry = d_ * w_[i] * table_.taps()[0] + diag_[i];
      const double off = d_ * rows[i] - d_ * w_[i] * table_.taps()[0];
      best = std::fmax(best, off + std::fabs(diag_entry));
    }
    return best;
  }

  /// Upper bound for the principal eigenvalue: smallest of the max row sums
  /// of A and of its diag(w)-symmetrized form (both essentially nonnegative).
  double perron_bound() const {
    auto rows = band_row_sums(w_);
    double ra = -1e300;
    for (std::size_t i = 0; i < n_; ++i) ra = std::fmax(ra, d_ * rows[i] + diag_[i]);

    std::vector<double> sq(n_);
    for (std::size_t i = 0; i < n_; ++i) sq[i] = std::sqrt(w_[i]);
    auto srows = band_row_sums(sq);
    double rs = -1e300;
    for (std::size_t i = 0; i < n_; ++i) rs = std::fmax(rs, d_ * sq[i] * srows[i] + diag_[i]);
    return std::fmin(ra, rs);
  }

  /// Factorization of sigma*I - A (an M-matrix when sigma exceeds the
  /// principal eigenvalue, so its inverse maps positive vectors to positive
  /// vectors).
  struct Shifted {
    std::unique_ptr<BandedLU> band;
    std::unique_ptr<DenseLU> dense;
    void solve(std::span<double> b) const {
      if (band) band->solve(b); else dense->solve(b);
    }
  };

  Shifted factor_shifted(double sigma) const {
    Shifted out;
    const auto& taps = table_.taps();
    if (3 * band_ + 1 >= n_) {
      out.dense = std::make_unique<DenseLU>(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          const std::size_t k = i > j ? i - j : j - i;
          double v = k <= band_ ? -d_ * w_[j] * taps[k] : 0.0;
          if (i == j) v += sigma - diag_[i];
          out.dense->at(i, j) = v;
        }
      }
      out.dense->factor();
    } else {
      out.band = std::make_unique<BandedLU>(n_, band_, band_);
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t lo = j > band_ ? j - band_ : 0;
        const std::size_t hi = std::min(n_ - 1, j + band_);
        for (std::size_t i = lo; i <= hi; ++i) {
          const std::size_t k = i > j ? i - j : j - i;
          double v = -d_ * w_[j] * taps[k];
          if (i == j) v += sigma - diag_[i];
          out.band->at(i, j) = v;
        }
      }
      out.band->factor();
    }
    return out;
  }

 private:
  static double effective_dx(double l, double dx_req) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("principal_eigenvalue: l must be positive and finite");
    }
    if (!(dx_req > 0.0)) {
      throw std::invalid_argument("principal_eigenvalue: dx must be positive");
    }
    const auto cells = std::max<long long>(32, std::llround(l / dx_req));
    return l / static_cast<double>(cells);
  }

  std::vector<double> band_row_sums(const std::vector<double>& weights) const {
    std::fill(pad_.begin(), pad_.end(), 0.0);
    std::copy(weights.begin(), weights.end(), pad_.begin() + static_cast<std::ptrdiff_t>(band_));
    std::vector<double> rows(n_);
    simd::ops().band_sym_matvec(table_.taps().data(), band_, pad_.data(), n_, rows.data());
    return rows;
  }

  KernelTable table_;
  double d_ = 0.0, dx_ = 0.0;
  std::size_t n_ = 0, band_ = 0;
  std::vector<double> w_, diag_;
  mutable std::vector<double> pad_;
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::fmax(m, std::fabs(x));
  return m;
}

double residual_inf(const std::vector<double>& av, const std::vector<double>& v,
                    double lambda) {
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    r = std::fmax(r, std::fabs(av[i] - lambda * v[i]));
  }
  return r;
}

}  // namespace

SpectralResult principal_eigenvalue(Boundary bnd, const Kernel& k, double d,
                                    double a0, double l, double dx) {
  if (!(d > 0.0)) throw std::invalid_argument("principal_eigenvalue: d must be positive");
  EigenOperator op(bnd, k, d, a0, l, dx);
  const std::size_t n = op.size();

  SpectralResult out;
  out.dx = op.spacing();
  out.matrix_norm = op.norm_inf();
  const double target = kResidualFactor * std::fmax(out.matrix_norm, 1e-300);

  std::vector<double> v(n, 1.0), av(n), next(n);
  const double shift = 2.0 * d;
  double lambda = 0.0, prev_lambda = 1e300, prev_stall_inc = 1e300;

  // Power phase: cheap matvecs while the increment keeps contracting.
  while (out.power_iterations < kPowerCap) {
    ++out.power_iterations;
    op.apply(v.data(), av.data());
    lambda = op.rayleigh(v, av);
    for (std::size_t i = 0; i < n; ++i) next[i] = av[i] + shift * v[i];
    const double nrm = inf_norm(next);
    if (nrm == 0.0) break;  // zero operator corner
    for (std::size_t i = 0; i < n; ++i) v[i] = next[i] / nrm;

    const double inc = std::fabs(lambda - prev_lambda);
    prev_lambda = lambda;
    if (inc < 1e-12 * std::fmax(1.0, std::fabs(lambda))) break;
    if (out.power_iterations % kPowerStall == 0) {
      if (inc > 0.25 * prev_stall_inc) break;  // slow geometric decay: stalled
      prev_stall_inc = inc;
    }
  }
  op.apply(v.data(), av.data());
  lambda = op.rayleigh(v, av);
  out.residual = residual_inf(av, v, lambda);

  // Refinement: inverse iteration with a shift approaching the principal
  // eigenvalue from above. The first shift is a Perron row-sum bound, so
  // sigma > lambda_1 holds and positivity is structural; later rounds move
  // sigma to the Rayleigh estimate plus the current residual.
  if (out.residual > target) {
    double sigma = op.perron_bound() + 1e-9 * std::fmax(1.0, std::fabs(lambda));
    for (int round = 0; round < 6 && out.residual > target; ++round) {
      auto fac = op.factor_shifted(sigma);
      double prev_res = out.residual;
      std::size_t stuck = 0;
      for (int it = 0; it < 400 && out.residual > target; ++it) {
        ++out.refine_iterations;
        next = v;
        fac.solve(next);
        const double nrm = inf_norm(next);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
        for (std::size_t i = 0; i < n; ++i) v[i] = next[i] / nrm;
        op.apply(v.data(), av.data());
        lambda = op.rayleigh(v, av);
        out.residual = residual_inf(av, v, lambda);
        // A shift far above the cluster contracts slowly; refresh it instead
        // of burning solves.
        if (out.residual > 0.7 * prev_res) {
          if (++stuck >= 3) break;
        } else {
          stuck = 0;
        }
        prev_res = out.residual;
      }
      sigma = lambda + std::fmax(out.residual, 1e-13 * std::fmax(1.0, std::fabs(lambda)));
    }
  }

  // Orient and validate: the principal eigenvector is positive.
  double maxval = 0.0;
  for (double x : v) maxval = std::fmax(maxval, std::fabs(x));
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(v[i]) == maxval) { arg = i; break; }
  }
  if (v[arg] < 0.0) {
    for (auto& x : v) x = -x;
  }
  for (auto& x : v) x /= maxval;

  bool positive = true;
  for (double x : v) positive = positive && x > 0.0;

  out.lambda = lambda;
  out.phi = std::move(v);
  out.converged = positive && out.residual <= target;
  return out;
}

std::optional<double> critical_length(Boundary bnd, const Kernel& k, double d,
                                      double a0, double dx) {
  if (!(a0 > 0.0)) throw std::invalid_argument("critical_length: a0 must be positive");
  if (!(d > 0.0)) throw std::invalid_argument("critical_length: d must be positive");
  const double threshold = bnd == Boundary::dirichlet ? d : 0.5 * d;
  if (a0 >= threshold) return std::nullopt;  // lambda_p > 0 for every l

  auto lam = [&](double l, double grid) {
    auto r = principal_eigenvalue(bnd, k, d, a0, l, grid);
    if (!r.converged) {
      throw std::runtime_error("critical_length: eigensolve stalled at l = " + std::to_string(l));
    }
    return r.lambda;
  };

  auto root = [&](double grid) {
    double lo = 0.5, hi = 1.0;
    while (lam(lo, grid) >= 0.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-6) throw std::runtime_error("critical_length: no sign change above l = 1e-6");
    }
    while (lam(hi, grid) <= 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e4) {
        throw std::runtime_error(
            "critical_length: no sign change below l = 1e4 (a0 too close to the threshold)");
      }
    }
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (lam(mid, grid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  const double coarse = root(dx);
  const double fine = root(0.5 * dx);
  return fine + (fine - coarse) / 3.0;
}

}  // namespace nlfb
