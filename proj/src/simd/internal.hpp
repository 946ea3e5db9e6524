#pragma once

#include "nkm/simd/kernels.hpp"

namespace nkm::simd::detail {

#if defined(NKM_HAVE_AVX2)
const Kernels& avx2_table();
#endif

}  // namespace nkm::simd::detail
