#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nlfb/kernel.hpp"
#include "nlfb/model.hpp"

namespace nlfb {

/// Principal eigenpair of the discretized operator
///   (A phi)_i = d * sum_j w_j J(x_i - x_j) phi_j + (a0 - d * s(x_i)) phi_i
/// on [0, l], with s == 1 (dirichlet wall) or s(x) = 1 - tail(x) (neumann
/// wall) and trapezoid weights w.
struct SpectralResult {
  double lambda = 0.0;
  std::vector<double> phi;            // positive, normalized to sup = 1
  std::size_t power_iterations = 0;
  std::size_t refine_iterations = 0;  // shifted inverse-iteration solves
  double residual = 0.0;              // ||A phi - lambda phi||_inf
  double matrix_norm = 0.0;           // ||A||_inf
  double dx = 0.0;                    // effective spacing l / cells
  bool converged = false;             // residual <= 1e-10 * matrix_norm
};

/// Largest eigenvalue of A via power iteration (shift 2d keeps the iteration
/// matrix nonnegative) with shifted inverse-iteration refinement when the
/// top of the spectrum clusters. The requested dx is rounded so that the
/// grid covers [0, l] exactly with at least 32 cells.
SpectralResult principal_eigenvalue(Boundary bnd, const Kernel& k, double d,
                                    double a0, double l, double dx);

/// Unique root of lambda_p(l) = 0, or nullopt when a0 >= d (dirichlet) or
/// a0 >= d/2 (neumann) and no finite root exists (spreading is
/// unconditional). Bisection to 1e-6 in l, run on two grids (dx, dx/2) and
/// Richardson-extrapolated. Throws when no bracket exists below l = 1e4.
std::optional<double> critical_length(Boundary bnd, const Kernel& k, double d,
                                      double a0, double dx = 1.0 / 64.0);

}  // namespace nlfb
