#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nkm/grid.hpp"
#include "nkm/simd/kernels.hpp"

namespace nkm {

enum class FftDirection { forward, inverse };

// Iterative radix-2 transform of one power-of-two length. Unnormalized in
// both directions; forward uses exp(-i 2 pi k n / N).
class FftPlan {
public:
  explicit FftPlan(std::size_t n, const simd::Kernels& kernels = simd::active());

  std::size_t size() const { return n_; }
  void execute(std::span<std::complex<double>> data, FftDirection dir) const;

private:
  std::size_t n_;
  const simd::Kernels* kernels_;
  std::vector<std::size_t> bitrev_;
  // Stage twiddles back to back: half = 1, 2, 4, ... each contributes half entries.
  std::vector<std::complex<double>> forward_twiddles_;
  std::vector<std::complex<double>> inverse_twiddles_;
};

// Complex 2-D array in the same row-major layout as Grid2D. Entry (a, b)
// stands for angular frequency (2 pi a' / (m1 d1), 2 pi b' / (m2 d2)) with a'
// the signed alias of a in [-m/2, m/2).
struct Spectrum2D {
  GridCounts counts;
  std::array<double, 2> spacing{1.0, 1.0};
  std::vector<std::complex<double>> entries;

  std::complex<double>& at(std::size_t a, std::size_t b) { return entries[a * counts.m2 + b]; }
  const std::complex<double>& at(std::size_t a, std::size_t b) const {
    return entries[a * counts.m2 + b];
  }
};

// Signed alias of index a for transform length m: a for a < m/2, a - m otherwise.
long signed_alias(std::size_t a, std::size_t m);

// Angular frequency represented by index a on an axis with m nodes of step h.
double angular_frequency(std::size_t a, std::size_t m, double step);

// In-place 2-D transform of a row-major m1 x m2 buffer.
void fft2_inplace(std::span<std::complex<double>> data, GridCounts counts, FftDirection dir,
                  const simd::Kernels& kernels = simd::active());

Spectrum2D dft2_forward(const Grid2D& grid, const simd::Kernels& kernels = simd::active());

struct InverseResult {
  std::vector<double> values;
  // Largest |imaginary part| discarded when taking the real part.
  double max_imag_residue = 0.0;
};

// Inverse with 1/(m1 m2) normalization; keeps the real part.
InverseResult dft2_inverse(const Spectrum2D& spectrum,
                           const simd::Kernels& kernels = simd::active());

}  // namespace nkm
