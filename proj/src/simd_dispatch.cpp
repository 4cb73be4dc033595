#include "nlfb/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace nlfb::simd {

// Defined in simd_avx2.cpp; returns nullptr on non-x86 builds.
const Ops* avx2_ops_impl();

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* select_backend() {
  const char* pref = std::getenv("NLFB_SIMD");
  const bool want_scalar = pref != nullptr && std::strcmp(pref, "scalar") == 0;
  const bool want_avx2 = pref != nullptr && std::strcmp(pref, "avx2") == 0;
  if (want_scalar) return &scalar_ops();
  const Ops* avx2 = cpu_has_avx2_fma() ? avx2_ops_impl() : nullptr;
  if (want_avx2 && avx2 == nullptr) return &scalar_ops();
  return avx2 != nullptr ? avx2 : &scalar_ops();
}

}  // namespace

const Ops* avx2_ops_if_supported() {
  return cpu_has_avx2_fma() ? avx2_ops_impl() : nullptr;
}

const Ops& ops() {
  static const Ops* selected = select_backend();
  return *selected;
}

}  // namespace nlfb::simd
