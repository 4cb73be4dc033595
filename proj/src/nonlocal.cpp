#include "nlfb/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlfb/grid.hpp"
#include "nlfb/simd.hpp"

namespace nlfb {

namespace {
constexpr double kTruncTail = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

KernelTable::KernelTable(const Kernel& k, double dx) : kernel_(k), dx_(dx) {
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw std::invalid_argument("KernelTable: dx must be positive and finite");
  }
  double half = 0.0;  // sum of raw taps J(k*dx), k >= 1, inside the cut
  if (k.first_moment_finite()) {
    truncated_ = true;
    cut_ = k.tail_radius(kTruncTail);
    tail_cut_ = k.tail(cut_);
    tail_ren_ = 1.0 / (1.0 - 2.0 * tail_cut_);
    const double w = std::ceil(cut_ / dx);
    band_limit_ = w >= 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(w);
    for (std::size_t j = 1; j <= band_limit_; ++j) {
      const double x = static_cast<double>(j) * dx;
      if (x > cut_) break;
      half += k.density(x);
    }
  } else {
    truncated_ = false;
    cut_ = kInf;
    tail_cut_ = 0.0;
    tail_ren_ = 1.0;
    band_limit_ = std::numeric_limits<std::size_t>::max() / 2;
    half = k.lattice_half_sum(dx);
  }
  renorm_ = 1.0 / (dx * (k.density(0.0) + 2.0 * half));
  if (k.density(dx) <= 0.0) {
    throw std::invalid_argument(
        "KernelTable: J(dx) = 0, the grid spacing exceeds the kernel's coupling range");
  }
  ensure_taps(std::min<std::size_t>(band_limit_, 8));
}

void KernelTable::ensure_taps(std::size_t w) {
  w = std::min(w, band_limit_);
  if (taps_.size() > w) return;
  const std::size_t old = taps_.size();
  taps_.resize(w + 1);
  for (std::size_t k = old; k <= w; ++k) {
    taps_[k] = density(static_cast<double>(k) * dx_);
  }
}

double KernelTable::density(double x) const {
  if (truncated_ && std::fabs(x) > cut_) return 0.0;
  return kernel_.density(x) * renorm_;
}

double KernelTable::tail(double z) const {
  if (truncated_) {
    if (z >= cut_) return 0.0;
    return (kernel_.tail(z) - tail_cut_) * tail_ren_;
  }
  return kernel_.tail(z);
}

double KernelTable::sink(double x) const {
  if (x < 0.0) throw std::invalid_argument("KernelTable::sink: x must be nonnegative");
  return 1.0 - tail(x);
}

std::span<const double> convolve(KernelTable& table, std::span<const double> u,
                                 std::span<const double> w, ConvScratch& scratch) {
  const std::size_t n = u.size();
  if (w.size() != n) throw std::invalid_argument("convolve: samples and weights differ in length");
  if (n == 0) return {};
  const std::size_t band = std::min(table.band_limit(), n - 1);
  table.ensure_taps(band);

  scratch.pad.assign(n + 2 * band, 0.0);
  double* v = scratch.pad.data() + band;
  for (std::size_t i = 0; i < n; ++i) v[i] = w[i] * u[i];
  scratch.out.resize(n);
  simd::ops().band_sym_matvec(table.taps().data(), band, scratch.pad.data(), n,
                              scratch.out.data());
  return {scratch.out.data(), n};
}

double boundary_flux_weighted(const KernelTable& table, std::span<const double> u,
                              std::span<const double> w, double h, double mu) {
  const std::size_t m = u.size();
  if (w.size() != m) {
    throw std::invalid_argument("boundary_flux: samples and weights differ in length");
  }
  if (m == 0) return 0.0;
  const double dx = table.dx();
  // Nodes with h - x_i beyond the kernel reach contribute nothing.
  std::size_t first = 0;
  if (table.truncated()) {
    const double reach = table.cut_radius();
    if (h > reach) {
      const double x_min = h - reach;
      first = static_cast<std::size_t>(std::ceil(x_min / dx - 1e-12));
      if (first >= m) return 0.0;
    }
  }
  double acc = 0.0;
  for (std::size_t i = first; i < m; ++i) {
    acc += w[i] * u[i] * table.tail(h - static_cast<double>(i) * dx);
  }
  return mu * acc;
}

double boundary_flux(const KernelTable& table, std::span<const double> u,
                     double h, double mu) {
  if (u.empty()) return 0.0;
  const auto w = front_weights(u.size(), table.dx(), h);
  return boundary_flux_weighted(table, u, w, h, mu);
}

std::vector<double> sink_profile(const KernelTable& table, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = table.sink(static_cast<double>(i) * table.dx());
  }
  return s;
}

}  // namespace nlfb
