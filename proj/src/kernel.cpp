#include "nlfb/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlfb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Locate the table segment containing z: returns i with ys[i] <= z < ys[i+1].
std::size_t segment_of(const std::vector<double>& ys, double z) {
  const auto it = std::upper_bound(ys.begin(), ys.end(), z);
  const std::size_t i = static_cast<std::size_t>(it - ys.begin());
  return (i == 0) ? 0 : i - 1;
}

// Hurwitz zeta sum_{k>=0} (a+k)^{-s} for s > 1, a > 0, by Euler-Maclaurin:
// direct terms until a+N >= 40, then the integral term, the half-term and
// four Bernoulli corrections, which reach machine precision there.
double hurwitz_zeta(double s, double a) {
  std::size_t n = 0;
  if (a < 40.0) n = static_cast<std::size_t>(std::ceil(40.0 - a));
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += std::pow(a + static_cast<double>(k), -s);
  const double x = a + static_cast<double>(n);
  const double xs = std::pow(x, -s);
  sum += x * xs / (s - 1.0);
  sum += 0.5 * xs;
  const double x2 = 1.0 / (x * x);
  double p = s * xs / x;
  sum += p / 12.0;
  p *= (s + 1.0) * (s + 2.0) * x2;
  sum -= p / 720.0;
  p *= (s + 3.0) * (s + 4.0) * x2;
  sum += p / 30240.0;
  p *= (s + 5.0) * (s + 6.0) * x2;
  sum -= p / 1209600.0;
  return sum;
}

}  // namespace

Kernel Kernel::laplace(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("laplace kernel: scale must be positive and finite");
  }
  Kernel k;
  k.kind_ = Family::laplace;
  k.family_ = "laplace";
  k.scale_ = scale;
  k.moment_ = 0.5 * scale;
  k.moment_finite_ = true;
  return k;
}

Kernel Kernel::polynomial_compact(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("polynomial kernel: radius must be positive and finite");
  }
  Kernel k;
  k.kind_ = Family::polynomial;
  k.family_ = "polynomial";
  k.scale_ = radius;
  k.moment_ = 5.0 * radius / 32.0;
  k.moment_finite_ = true;
  return k;
}

Kernel Kernel::algebraic_tail(double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument(
        "algebraic kernel: gamma must exceed 1 (the density is not normalizable otherwise)");
  }
  Kernel k;
  k.kind_ = Family::algebraic;
  k.family_ = "algebraic";
  k.scale_ = gamma;
  k.moment_finite_ = gamma > 2.0;
  k.moment_ = k.moment_finite_ ? 1.0 / (2.0 * (gamma - 2.0)) : kInf;
  return k;
}

Kernel Kernel::from_table(std::span<const double> x, std::span<const double> j) {
  const std::size_t m = x.size();
  if (m < 2 || j.size() != m) {
    throw std::invalid_argument("table kernel: need matching x/j arrays with at least 2 samples");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(j[i]) || j[i] < 0.0) {
      throw std::invalid_argument("table kernel: samples must be finite with nonnegative density");
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw std::invalid_argument("table kernel: abscissae must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = m - 1 - i;
    if (std::fabs(x[i] + x[r]) > 1e-12 * std::fmax(1.0, std::fabs(x[r])) ||
        std::fabs(j[i] - j[r]) > 1e-12 * std::fmax(1.0, std::fabs(j[r]))) {
      throw std::invalid_argument("table kernel: abscissae and values must be symmetric about 0");
    }
  }

  // Keep the nonnegative half; insert an x = 0 node if the table straddles it.
  std::vector<double> ys, vs;
  const std::size_t mid = m / 2;
  if (m % 2 == 1) {
    for (std::size_t i = mid; i < m; ++i) {
      ys.push_back(x[i]);
      vs.push_back(j[i]);
    }
  } else {
    // Values at -x[mid] and x[mid] match, so the interpolant is flat across 0.
    ys.push_back(0.0);
    vs.push_back(j[mid]);
    for (std::size_t i = mid; i < m; ++i) {
      ys.push_back(x[i]);
      vs.push_back(j[i]);
    }
  }
  if (vs.front() <= 0.0) {
    throw std::invalid_argument("table kernel: density must be positive at 0");
  }

  double half_mass = 0.0;
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    half_mass += 0.5 * (ys[i + 1] - ys[i]) * (vs[i] + vs[i + 1]);
  }
  if (!(half_mass > 0.0)) {
    throw std::invalid_argument("table kernel: total mass must be positive");
  }
  for (double& v : vs) v /= 2.0 * half_mass;

  Kernel k;
  k.kind_ = Family::table;
  k.family_ = "table";
  k.scale_ = ys.back();
  k.ys_ = std::move(ys);
  k.vs_ = std::move(vs);

  // Exact tails at the nodes (the interpolant is integrated segment-wise).
  const std::size_t n = k.ys_.size();
  k.tail_at_.assign(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    k.tail_at_[i] = k.tail_at_[i + 1] +
                    0.5 * (k.ys_[i + 1] - k.ys_[i]) * (k.vs_[i] + k.vs_[i + 1]);
  }
  // tail is piecewise quadratic, so Simpson per segment is exact for S.
  k.tail2_at_.assign(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double lo = k.ys_[i], hi = k.ys_[i + 1];
    const double tm = k.tail(0.5 * (lo + hi));
    k.tail2_at_[i] = k.tail2_at_[i + 1] +
                     (hi - lo) / 6.0 * (k.tail_at_[i] + 4.0 * tm + k.tail_at_[i + 1]);
  }
  // First moment, exact for the piecewise-linear density.
  double mom = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double lo = k.ys_[i], hi = k.ys_[i + 1];
    const double slope = (k.vs_[i + 1] - k.vs_[i]) / (hi - lo);
    const double icpt = k.vs_[i] - slope * lo;
    mom += icpt * (hi * hi - lo * lo) / 2.0 + slope * (hi * hi * hi - lo * lo * lo) / 3.0;
  }
  k.moment_ = mom;
  k.moment_finite_ = true;
  return k;
}

double Kernel::density(double x) const {
  const double z = std::fabs(x);
  switch (kind_) {
    case Family::laplace:
      return std::exp(-z / scale_) / (2.0 * scale_);
    case Family::polynomial: {
      if (z >= scale_) return 0.0;
      const double s = z / scale_;
      const double q = 1.0 - s * s;
      return 15.0 / (16.0 * scale_) * q * q;
    }
    case Family::algebraic:
      return 0.5 * (scale_ - 1.0) * std::pow(1.0 + z, -scale_);
    case Family::table: {
      if (z >= ys_.back()) return 0.0;
      const std::size_t i = segment_of(ys_, z);
      const double t = (z - ys_[i]) / (ys_[i + 1] - ys_[i]);
      return vs_[i] + t * (vs_[i + 1] - vs_[i]);
    }
  }
  return 0.0;
}

double Kernel::tail(double z) const {
  if (z < 0.0) throw std::invalid_argument("Kernel::tail: z must be nonnegative");
  switch (kind_) {
    case Family::laplace:
      return 0.5 * std::exp(-z / scale_);
    case Family::polynomial: {
      if (z >= scale_) return 0.0;
      const double s = z / scale_;
      return 0.5 - 15.0 / 16.0 * (s - 2.0 / 3.0 * s * s * s + 0.2 * s * s * s * s * s);
    }
    case Family::algebraic:
      return 0.5 * std::pow(1.0 + z, 1.0 - scale_);
    case Family::table: {
      if (z >= ys_.back()) return 0.0;
      const std::size_t i = segment_of(ys_, z);
      // Exact integral of the linear segment from z to its right node.
      const double jz = density(z);
      return tail_at_[i + 1] + 0.5 * (ys_[i + 1] - z) * (jz + vs_[i + 1]);
    }
  }
  return 0.0;
}

double Kernel::tail_integral(double z) const {
  if (z < 0.0) throw std::invalid_argument("Kernel::tail_integral: z must be nonnegative");
  if (!moment_finite_) {
    throw std::logic_error("Kernel::tail_integral: diverges when the first moment is infinite");
  }
  switch (kind_) {
    case Family::laplace:
      return 0.5 * scale_ * std::exp(-z / scale_);
    case Family::polynomial: {
      if (z >= scale_) return 0.0;
      const double s = z / scale_;
      const double t1 = 0.5 * (1.0 - s * s);
      const double t3 = 0.25 * (1.0 - s * s * s * s);
      const double t5 = (1.0 - s * s * s * s * s * s) / 6.0;
      return scale_ * 15.0 / 16.0 *
             (8.0 / 15.0 * (1.0 - s) - (t1 - 2.0 / 3.0 * t3 + 0.2 * t5));
    }
    case Family::algebraic:
      return 0.5 * std::pow(1.0 + z, 2.0 - scale_) / (scale_ - 2.0);
    case Family::table: {
      if (z >= ys_.back()) return 0.0;
      const std::size_t i = segment_of(ys_, z);
      const double hi = ys_[i + 1];
      const double tm = tail(0.5 * (z + hi));
      return tail2_at_[i + 1] + (hi - z) / 6.0 * (tail(z) + 4.0 * tm + tail_at_[i + 1]);
    }
  }
  return 0.0;
}

double Kernel::support_radius() const {
  switch (kind_) {
    case Family::laplace:
    case Family::algebraic:
      return kInf;
    case Family::polynomial:
    case Family::table:
      return scale_;
  }
  return kInf;
}

double Kernel::lattice_half_sum(double dx) const {
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw std::invalid_argument("Kernel::lattice_half_sum: dx must be positive and finite");
  }
  switch (kind_) {
    case Family::laplace: {
      const double q = std::exp(-dx / scale_);
      return q / (-std::expm1(-dx / scale_)) / (2.0 * scale_);
    }
    case Family::algebraic:
      // sum (1 + k*dx)^-gamma = dx^-gamma * zeta(gamma, 1 + 1/dx).
      return 0.5 * (scale_ - 1.0) * std::pow(dx, -scale_) *
             hurwitz_zeta(scale_, 1.0 + 1.0 / dx);
    case Family::polynomial:
    case Family::table: {
      double sum = 0.0;
      const double r = support_radius();
      for (std::size_t k = 1; static_cast<double>(k) * dx < r; ++k) {
        sum += density(static_cast<double>(k) * dx);
      }
      return sum;
    }
  }
  return 0.0;
}

double Kernel::tail_radius(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("Kernel::tail_radius: eps must be positive");
  if (support_radius() < kInf) return support_radius();
  double hi = 1.0;
  while (tail(hi) > eps) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("Kernel::tail_radius: tail never reaches eps");
  }
  double lo = 0.5 * hi;
  if (tail(lo) <= eps && lo > 0.0) lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-9 * std::fmax(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > eps ? lo : hi) = mid;
  }
  return hi;
}

bool Kernel::first_moment_finite() const { return moment_finite_; }

double Kernel::first_moment() const { return moment_; }

}  // namespace nlfb
