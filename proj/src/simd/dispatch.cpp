#include <atomic>
#include <cstdlib>
#include <cstring>

#include "morphkit/simd/kernels.hpp"

namespace morphkit::simd {

#if defined(MORPHKIT_COMPILED_AVX2)
const Kernels* avx2_kernels_impl();
#endif

namespace {

bool cpu_supports_avx2() {
#if defined(MORPHKIT_COMPILED_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const Kernels*> g_active{nullptr};

const Kernels* resolve_initial() {
  const Kernels* pick = &scalar_kernels();
  if (const Kernels* v = avx2_kernels(); v != nullptr) pick = v;
  if (const char* env = std::getenv("MORPHKIT_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) pick = &scalar_kernels();
    if (std::strcmp(env, "avx2") == 0 && avx2_kernels()) pick = avx2_kernels();
  }
  return pick;
}

}  // namespace

const Kernels* avx2_kernels() {
#if defined(MORPHKIT_COMPILED_AVX2)
  static const Kernels* k = cpu_supports_avx2() ? avx2_kernels_impl() : nullptr;
  return k;
#else
  return nullptr;
#endif
}

const Kernels& active() {
  const Kernels* k = g_active.load(std::memory_order_acquire);
  if (!k) {
    k = resolve_initial();
    g_active.store(k, std::memory_order_release);
  }
  return *k;
}

Backend active_backend() {
  return &active() == &scalar_kernels() ? Backend::scalar : Backend::avx2;
}

bool set_backend(Backend b) {
  if (b == Backend::scalar) {
    g_active.store(&scalar_kernels(), std::memory_order_release);
    return true;
  }
  if (const Kernels* v = avx2_kernels()) {
    g_active.store(v, std::memory_order_release);
    return true;
  }
  return false;
}

}  // namespace morphkit::simd
