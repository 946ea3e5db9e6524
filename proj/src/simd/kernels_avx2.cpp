// Compiled with -mavx2 only (no FMA), so every product and sum rounds exactly
// as in the scalar reference.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "internal.hpp"

namespace nkm::simd {
namespace {

void scale_complex(std::complex<double>* data, const double* factor, std::size_t n) {
  auto* d = reinterpret_cast<double*>(data);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128d f = _mm_loadu_pd(factor + i);
    const __m256d ff = _mm256_permute4x64_pd(_mm256_castpd128_pd256(f), 0x50);
    const __m256d v = _mm256_loadu_pd(d + 2 * i);
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(v, ff));
  }
  for (; i < n; ++i) {
    data[i] = {data[i].real() * factor[i], data[i].imag() * factor[i]};
  }
}

inline __m256d complex_mul(__m256d w, __m256d b) {
  const __m256d wr = _mm256_movedup_pd(w);
  const __m256d wi = _mm256_permute_pd(w, 0xF);
  const __m256d bswap = _mm256_permute_pd(b, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(wr, b), _mm256_mul_pd(wi, bswap));
}

void butterfly_stage(std::complex<double>* data, std::size_t n, std::size_t half,
                     const std::complex<double>* twiddles) {
  auto* d = reinterpret_cast<double*>(data);
  const auto* tw = reinterpret_cast<const double*>(twiddles);
  if (half == 1) {
    // Twiddle is exactly 1: two butterflies per register pair.
    for (std::size_t block = 0; block < n; block += 2) {
      const __m128d a = _mm_loadu_pd(d + 2 * block);
      const __m128d b = _mm_loadu_pd(d + 2 * block + 2);
      _mm_storeu_pd(d + 2 * block, _mm_add_pd(a, b));
      _mm_storeu_pd(d + 2 * block + 2, _mm_sub_pd(a, b));
    }
    return;
  }
  for (std::size_t block = 0; block < n; block += 2 * half) {
    double* lo = d + 2 * block;
    double* hi = d + 2 * (block + half);
    for (std::size_t j = 0; j < half; j += 2) {
      const __m256d a = _mm256_loadu_pd(lo + 2 * j);
      const __m256d b = _mm256_loadu_pd(hi + 2 * j);
      const __m256d t = complex_mul(_mm256_loadu_pd(tw + 2 * j), b);
      _mm256_storeu_pd(lo + 2 * j, _mm256_add_pd(a, t));
      _mm256_storeu_pd(hi + 2 * j, _mm256_sub_pd(a, t));
    }
  }
}

void nearest_center(const double* xs, const double* ys, std::size_t n, const double* cx,
                    const double* cy, std::size_t k, std::int32_t* label, double* dist2) {
  std::size_t i = 0;
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d y = _mm256_loadu_pd(ys + i);
    __m256d best = inf;
    __m256d arg = _mm256_setzero_pd();
    for (std::size_t j = 0; j < k; ++j) {
      const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(cx[j]));
      const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(cy[j]));
      const __m256d dd = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      const __m256d closer = _mm256_cmp_pd(dd, best, _CMP_LT_OQ);
      best = _mm256_blendv_pd(best, dd, closer);
      arg = _mm256_blendv_pd(arg, _mm256_set1_pd(static_cast<double>(j)), closer);
    }
    _mm256_storeu_pd(dist2 + i, best);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(label + i), _mm256_cvtpd_epi32(arg));
  }
  if (i < n) {
    scalar_kernels().nearest_center(xs + i, ys + i, n - i, cx, cy, k, label + i, dist2 + i);
  }
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void weighted_moments(const double* xs, const double* ys, const double* w,
                      const std::int32_t* label, std::size_t n, std::size_t k, double* mass,
                      double* sx, double* sy) {
  for (std::size_t j = 0; j < k; ++j) {
    __m256d am = _mm256_setzero_pd();
    __m256d ax = _mm256_setzero_pd();
    __m256d ay = _mm256_setzero_pd();
    const __m128i target = _mm_set1_epi32(static_cast<int>(j));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m128i lab = _mm_loadu_si128(reinterpret_cast<const __m128i*>(label + i));
      const __m256d sel = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_cmpeq_epi32(lab, target)));
      const __m256d wv = _mm256_and_pd(_mm256_loadu_pd(w + i), sel);
      am = _mm256_add_pd(am, wv);
      ax = _mm256_add_pd(ax, _mm256_mul_pd(wv, _mm256_loadu_pd(xs + i)));
      ay = _mm256_add_pd(ay, _mm256_mul_pd(wv, _mm256_loadu_pd(ys + i)));
    }
    double m = hsum(am);
    double mx = hsum(ax);
    double my = hsum(ay);
    for (; i < n; ++i) {
      if (label[i] == static_cast<std::int32_t>(j)) {
        m += w[i];
        mx += w[i] * xs[i];
        my += w[i] * ys[i];
      }
    }
    mass[j] = m;
    sx[j] = mx;
    sy[j] = my;
  }
}

double weighted_sum(const double* w, const double* v, std::size_t n) {
  // Lane-wise Neumaier summation, lanes merged the same way.
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d term = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(v + i));
    const __m256d t = _mm256_add_pd(sum, term);
    const __m256d sum_bigger =
        _mm256_cmp_pd(_mm256_andnot_pd(sign, sum), _mm256_andnot_pd(sign, term), _CMP_GE_OQ);
    const __m256d c_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), term);
    const __m256d c_term = _mm256_add_pd(_mm256_sub_pd(term, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(c_term, c_sum, sum_bigger));
    sum = t;
  }
  alignas(32) double s[4];
  alignas(32) double c[4];
  _mm256_store_pd(s, sum);
  _mm256_store_pd(c, comp);
  double total = 0.0;
  double total_comp = c[0] + c[1] + c[2] + c[3];
  auto add = [&](double term) {
    const double t = total + term;
    if (std::abs(total) >= std::abs(term)) {
      total_comp += (total - t) + term;
    } else {
      total_comp += (term - t) + total;
    }
    total = t;
  };
  for (double lane : s) {
    add(lane);
  }
  for (; i < n; ++i) {
    add(w[i] * v[i]);
  }
  return total + total_comp;
}

const Kernels kAvx2{Isa::avx2, scale_complex, butterfly_stage, nearest_center, weighted_moments,
                    weighted_sum};

}  // namespace

namespace detail {
const Kernels& avx2_table() { return kAvx2; }
}  // namespace detail

}  // namespace nkm::simd
