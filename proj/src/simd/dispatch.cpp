#include <cstdlib>
#include <string>

#include "internal.hpp"

namespace nkm::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const Kernels* avx2_kernels() {
#if defined(NKM_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() {
  static const Kernels& table = [] () -> const Kernels& {
    const char* forced = std::getenv("NKM_SIMD");
    if (forced != nullptr && std::string(forced) == "scalar") {
      return scalar_kernels();
    }
    if (const Kernels* k = avx2_kernels()) {
      return *k;
    }
    return scalar_kernels();
  }();
  return table;
}

}  // namespace nkm::simd
