#include "nlfb/simd.hpp"

#include <cstddef>

namespace nlfb::simd {
namespace {

void band_sym_matvec_scalar(const double* c, std::size_t w, const double* vpad,
                            std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t center = w + i;
    double acc = c[0] * vpad[center];
    for (std::size_t k = 1; k <= w; ++k) {
      acc += c[k] * (vpad[center + k] + vpad[center - k]);
    }
    out[i] = acc;
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void euler_quadratic_scalar(double* u, const double* conv, const double* sink,
                            const double* alpha, double beta, double d,
                            double dt, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i];
    u[i] = ui + dt * (d * conv[i] - d * sink[i] * ui + ui * (alpha[i] - beta * ui));
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{band_sym_matvec_scalar, dot_scalar, euler_quadratic_scalar,
                       "scalar"};
  return ops;
}

}  // namespace nlfb::simd
