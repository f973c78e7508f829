#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace qsp::kernels {

const KernelTable* avx2() {
#if defined(QSPREP_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("QSPREP_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar();
    if (const auto* t = avx2()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace qsp::kernels
