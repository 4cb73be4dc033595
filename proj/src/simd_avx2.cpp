// AVX2+FMA variants of the hot loops. This translation unit is compiled with
// -mavx2 -mfma and must only be reached through the runtime dispatch in
// simd_dispatch.cpp.

#include "nlfb/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cstddef>

namespace nlfb::simd {
namespace {

void band_sym_matvec_avx2(const double* c, std::size_t w, const double* vpad,
                          std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const double* ctr = vpad + w + i;
    const __m256d c0 = _mm256_set1_pd(c[0]);
    __m256d acc0 = _mm256_mul_pd(c0, _mm256_loadu_pd(ctr));
    __m256d acc1 = _mm256_mul_pd(c0, _mm256_loadu_pd(ctr + 4));
    for (std::size_t k = 1; k <= w; ++k) {
      const __m256d ck = _mm256_set1_pd(c[k]);
      const __m256d hi0 = _mm256_loadu_pd(ctr + k);
      const __m256d lo0 = _mm256_loadu_pd(ctr - k);
      const __m256d hi1 = _mm256_loadu_pd(ctr + 4 + k);
      const __m256d lo1 = _mm256_loadu_pd(ctr + 4 - k);
      acc0 = _mm256_fmadd_pd(ck, _mm256_add_pd(hi0, lo0), acc0);
      acc1 = _mm256_fmadd_pd(ck, _mm256_add_pd(hi1, lo1), acc1);
    }
    _mm256_storeu_pd(out + i, acc0);
    _mm256_storeu_pd(out + i + 4, acc1);
  }
  for (; i < n; ++i) {
    const std::size_t center = w + i;
    double acc = c[0] * vpad[center];
    for (std::size_t k = 1; k <= w; ++k) {
      acc += c[k] * (vpad[center + k] + vpad[center - k]);
    }
    out[i] = acc;
  }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double result = lane[0] + lane[1] + lane[2] + lane[3];
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

void euler_quadratic_avx2(double* u, const double* conv, const double* sink,
                          const double* alpha, double beta, double d, double dt,
                          std::size_t n) {
  const __m256d vbeta = _mm256_set1_pd(beta);
  const __m256d vd = _mm256_set1_pd(d);
  const __m256d vdt = _mm256_set1_pd(dt);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ui = _mm256_loadu_pd(u + i);
    const __m256d ci = _mm256_loadu_pd(conv + i);
    const __m256d si = _mm256_loadu_pd(sink + i);
    const __m256d ai = _mm256_loadu_pd(alpha + i);
    // rate = d*conv - d*sink*u + u*(alpha - beta*u)
    const __m256d growth = _mm256_fnmadd_pd(vbeta, ui, ai);
    __m256d rate = _mm256_mul_pd(vd, ci);
    rate = _mm256_fnmadd_pd(_mm256_mul_pd(vd, si), ui, rate);
    rate = _mm256_fmadd_pd(ui, growth, rate);
    _mm256_storeu_pd(u + i, _mm256_fmadd_pd(vdt, rate, ui));
  }
  for (; i < n; ++i) {
    const double ui = u[i];
    u[i] = ui + dt * (d * conv[i] - d * sink[i] * ui + ui * (alpha[i] - beta * ui));
  }
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{band_sym_matvec_avx2, dot_avx2, euler_quadratic_avx2,
                       "avx2"};
  return &ops;
}

}  // namespace nlfb::simd

#else

namespace nlfb::simd {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace nlfb::simd

#endif
