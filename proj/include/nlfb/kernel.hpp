#pragma once

#include <span>
#include <string>
#include <vector>

namespace nlfb {

/// Even, unit-mass dispersal kernel J with closed-form tail integrals.
///
/// Every instance satisfies: J even and continuous, J(0) > 0, total mass 1.
/// tail(z) = int_z^inf J and tail_integral(z) = int_z^inf tail are the two
/// derived quantities the solvers need (front flux and its far-field
/// closure). Whether int_0^inf x J(x) dx is finite decides between fronts
/// that travel at a finite speed and fronts that accelerate, so the flag and
/// its witness value are part of the kernel, not of the caller.
class Kernel {
 public:
  /// J(x) = e^{-|x|/scale} / (2*scale).
  static Kernel laplace(double scale = 1.0);

  /// J(x) = (15/(16 r)) * (1 - (x/r)^2)^2 on [-r, r], zero outside.
  static Kernel polynomial_compact(double radius = 1.0);

  /// J(x) = ((gamma-1)/2) * (1+|x|)^(-gamma), gamma > 1. The first moment is
  /// finite exactly when gamma > 2.
  static Kernel algebraic_tail(double gamma);

  /// Piecewise-linear kernel through (x_i, j_i). Abscissae must be strictly
  /// increasing and symmetric about 0 with matching values; the density is
  /// renormalized to unit mass.
  static Kernel from_table(std::span<const double> x, std::span<const double> j);

  double density(double x) const;
  /// T(z) = int_z^inf J, for z >= 0. T(0) = 1/2.
  double tail(double z) const;
  /// S(z) = int_z^inf T, for z >= 0. Requires a finite first moment
  /// (S(0) equals the first moment).
  double tail_integral(double z) const;

  /// Smallest radius outside which the density vanishes; +inf for unbounded
  /// tails.
  double support_radius() const;
  /// sum_{k>=1} J(k*dx): half of the lattice mass at spacing dx, evaluated
  /// in closed form (geometric series / Hurwitz zeta) for unbounded tails
  /// and by direct summation for compact supports.
  double lattice_half_sum(double dx) const;
  /// Smallest z with tail(z) <= eps (support_radius for compact kernels).
  double tail_radius(double eps) const;

  bool first_moment_finite() const;
  /// int_0^inf x J(x) dx; +inf when the moment diverges.
  double first_moment() const;

  const std::string& family() const { return family_; }

 private:
  enum class Family { laplace, polynomial, algebraic, table };

  Kernel() = default;

  Family kind_ = Family::laplace;
  std::string family_;
  double scale_ = 1.0;   // laplace scale / polynomial radius / algebraic gamma
  // Table data, nonnegative half only: nodes ys_ (ys_[0] = 0), values vs_
  // normalized to unit mass, plus exact cumulative tails at the nodes.
  std::vector<double> ys_, vs_, tail_at_, tail2_at_;
  double moment_ = 0.0;
  bool moment_finite_ = true;
};

}  // namespace nlfb
