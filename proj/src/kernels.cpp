#include "hmplan/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace hmplan::kernels {

#ifdef HMPLAN_AVX2_TU
const Ops& avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#ifdef HMPLAN_AVX2_TU
  static const bool supported = __builtin_cpu_supports("avx2");
  if (supported) return &avx2_ops_impl();
#endif
  return nullptr;
}

namespace {

std::atomic<const Ops*> g_forced{nullptr};

const Ops* select_default() {
  if (const char* env = std::getenv("HMPLAN_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && avx2_ops()) return avx2_ops();
  }
  if (const Ops* v = avx2_ops()) return v;
  return &scalar_ops();
}

}  // namespace

const Ops& active_ops() {
  if (const Ops* f = g_forced.load(std::memory_order_acquire)) return *f;
  static const Ops* selected = select_default();
  return *selected;
}

void force_ops(const Ops* ops) { g_forced.store(ops, std::memory_order_release); }

}  // namespace hmplan::kernels
