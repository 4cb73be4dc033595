#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlfb/kernel.hpp"

namespace nlfb {

/// Discretization of one kernel on a grid spacing dx.
///
/// Kernels with a finite first moment and unbounded support are cut at the
/// radius where tail < 1e-10 and renormalized over the remaining support, so
/// the discrete operator conserves what the flux functional sees. Kernels
/// whose first moment diverges are never cut: their far tail is exactly what
/// drives accelerated fronts, so taps extend on demand and the analytic tail
/// is used as-is.
///
/// Taps are scaled so that the full trapezoid lattice sum dx*(J(0) +
/// 2*sum_k J(k*dx)) equals 1 exactly. Raw trapezoid sums overshoot the unit
/// mass by O(dx^2) for kernels with a kink at 0, which would let discrete
/// row sums exceed the sink term and silently break every comparison-based
/// invariant (u <= u*, supersolution starts decreasing, eigenvalues below
/// a0). With the exact lattice mass those orderings are structural: any row
/// restricted to a finite window sums to strictly less than the full lattice.
class KernelTable {
 public:
  KernelTable(const Kernel& k, double dx);

  double dx() const { return dx_; }
  const Kernel& kernel() const { return kernel_; }
  bool truncated() const { return truncated_; }
  /// Cut radius for truncated kernels, +inf otherwise.
  double cut_radius() const { return cut_; }

  /// Largest useful tap index: taps at k > band_limit() are identically 0
  /// (truncated kernels) or simply not materialized yet (heavy tails).
  std::size_t band_limit() const { return band_limit_; }

  /// Guarantees taps()[0..w] are materialized; w is clamped to band_limit().
  void ensure_taps(std::size_t w);
  std::span<const double> taps() const { return taps_; }

  /// Effective density at the tap grid (after any renormalization).
  double density(double x) const;
  /// Effective tail, consistent with the (possibly renormalized) density.
  double tail(double z) const;
  /// Neumann sink 1 - tail(x) = mass reachable from x without crossing 0.
  double sink(double x) const;

 private:
  Kernel kernel_;
  double dx_ = 0.0;
  bool truncated_ = false;
  double cut_ = 0.0;
  double renorm_ = 1.0;    // density scale: 1 / (lattice sum of raw taps)
  double tail_ren_ = 1.0;  // tail scale: 1 / (1 - 2*tail(cut))
  double tail_cut_ = 0.0;  // tail(cut) of the raw kernel
  std::size_t band_limit_ = 0;
  std::vector<double> taps_;
};

/// Scratch buffers for the convolution so the stepping loops stay
/// allocation-free.
struct ConvScratch {
  std::vector<double> pad;
  std::vector<double> weighted;
  std::vector<double> out;
};

/// Discrete (J * u)(x_i) over the window [0, L]: out[i] = sum_j w_j J(x_i -
/// x_j) u_j for i in [0, n). u and w must have equal length n; the caller
/// supplies quadrature weights (full trapezoid or front weights).
/// Returns a span into scratch.out.
std::span<const double> convolve(KernelTable& table, std::span<const double> u,
                                 std::span<const double> w, ConvScratch& scratch);

/// Outward mass flow across the front: mu * int_0^h u(x) tail(h - x) dx with
/// the integrand sampled at x_i = i*dx, x_{m-1} < h. The all-zero profile
/// gives 0.
double boundary_flux(const KernelTable& table, std::span<const double> u,
                     double h, double mu);

/// Same flux but with caller-provided weights (front_weights of the state),
/// avoiding the rebuild inside the stepping loop.
double boundary_flux_weighted(const KernelTable& table, std::span<const double> u,
                              std::span<const double> w, double h, double mu);

/// Position-dependent neumann sink j(x) = 1 - tail(x) evaluated on the node
/// ladder x_i = i*dx, i < n.
std::vector<double> sink_profile(const KernelTable& table, std::size_t n);

}  // namespace nlfb
