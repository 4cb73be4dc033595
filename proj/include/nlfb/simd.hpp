#pragma once

#include <cstddef>

namespace nlfb::simd {

/// Vectorizable inner loops shared by the solvers. Every entry point has a
/// scalar reference implementation; an AVX2+FMA variant is substituted at
/// runtime when the CPU supports it. Results may differ from the scalar
/// reference only by floating-point reassociation.
struct Ops {
  /// Symmetric banded Toeplitz matvec:
  ///   out[i] = c[0]*v[i] + sum_{k=1..w} c[k]*(v[i+k] + v[i-k]),  0 <= i < n,
  /// where v = vpad + w and vpad carries w zeros of padding on each side
  /// (total length n + 2w). This is the discrete convolution against an even
  /// kernel sampled at node distances k*dx.
  void (*band_sym_matvec)(const double* c, std::size_t w, const double* vpad,
                          std::size_t n, double* out);

  /// Plain dot product, used for quadrature sums and boundary-flux weights.
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// Fused explicit Euler update with a quadratic (logistic-family) reaction:
  ///   u[i] += dt * (d*conv[i] - d*sink[i]*u[i] + u[i]*(alpha[i] - beta*u[i])).
  void (*euler_quadratic)(double* u, const double* conv, const double* sink,
                          const double* alpha, double beta, double d, double dt,
                          std::size_t n);

  const char* name;
};

/// Backend chosen at first call: AVX2 when the CPU supports it, otherwise
/// scalar. The environment variable NLFB_SIMD=scalar|avx2|auto overrides.
const Ops& ops();

/// Scalar reference backend, always available.
const Ops& scalar_ops();

/// AVX2 backend, or nullptr when the CPU or build does not support it.
const Ops* avx2_ops_if_supported();

}  // namespace nlfb::simd
