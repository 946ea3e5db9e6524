#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64 builds, an AVX2 version; the table in use is chosen once at
// runtime from the CPU features (NKM_SIMD=scalar in the environment forces
// the reference path).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace nkm::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct Kernels {
  Isa isa;

  // data[i] *= factor[i] for n complex entries.
  void (*scale_complex)(std::complex<double>* data, const double* factor, std::size_t n);

  // One radix-2 decimation-in-time stage over a bit-reversed buffer of length
  // n: for every block of 2*half entries, (a, b) <- (a + w*b, a - w*b) with
  // twiddles w[0..half).
  void (*butterfly_stage)(std::complex<double>* data, std::size_t n, std::size_t half,
                          const std::complex<double>* twiddles);

  // Nearest center per point (ties to the lowest index) and the squared
  // distance to it.
  void (*nearest_center)(const double* xs, const double* ys, std::size_t n, const double* cx,
                         const double* cy, std::size_t k, std::int32_t* label, double* dist2);

  // For cluster j: mass[j] = sum w, sx[j] = sum w*x, sy[j] = sum w*y over
  // points labelled j. Output arrays have length k and are overwritten.
  void (*weighted_moments)(const double* xs, const double* ys, const double* w,
                           const std::int32_t* label, std::size_t n, std::size_t k, double* mass,
                           double* sx, double* sy);

  // Compensated sum of w[i] * v[i].
  double (*weighted_sum)(const double* w, const double* v, std::size_t n);
};

const Kernels& scalar_kernels();

// nullptr when the build has no AVX2 variant or the CPU lacks AVX2.
const Kernels* avx2_kernels();

// Table selected for this process.
const Kernels& active();

}  // namespace nkm::simd
