#pragma once

#include <span>
#include <string>
#include <vector>

#include "nkm/fft.hpp"
#include "nkm/grid.hpp"
#include "nkm/spectral.hpp"
#include "nkm/types.hpp"

namespace nkm {

struct DensityEstimate {
  Grid2D grid;
  // Most negative value before clipping (0 when nothing was negative).
  double raw_min = 0.0;
  bool clipped = false;
  double max_imag_residue = 0.0;
  std::vector<std::string> warnings;
};

struct DensityOptions {
  bool clip = true;
  // Power of two >= 1; 1 disables padding.
  std::size_t padding_factor = 4;
};

// Binned and transformed observations. Building it is the bandwidth-independent
// part of the estimate, so bandwidth searches construct it once and call
// deconvolve per candidate.
//
// The histogram is zero-padded to padding_factor times its node counts before
// the transform and the result cropped back, so the circular convolution does
// not wrap kernel tails around the domain.
class ObservedSpectrum {
public:
  ObservedSpectrum(std::span<const Point2> obs, GridCounts counts, const BoundsPolicy& policy = {},
                   std::size_t padding_factor = 4, const simd::Kernels& kernels = simd::active());

  const Grid2D& histogram() const { return histogram_; }
  std::size_t sample_size() const { return n_; }

  DensityEstimate deconvolve(const NoiseModel& model, const Bandwidth& bw,
                             const DensityOptions& options = {}) const;

private:
  std::size_t n_;
  std::size_t padding_;
  Grid2D histogram_;
  Spectrum2D spectrum_;
  const simd::Kernels* kernels_;
};

DensityEstimate estimate_density_fft(std::span<const Point2> obs, const NoiseModel& model,
                                     const Bandwidth& bw, GridCounts counts,
                                     const BoundsPolicy& policy = {},
                                     const DensityOptions& options = {});

// Slow reference: evaluates the deconvolution kernel estimator pointwise, the
// kernel itself by Gauss-Legendre quadrature of its inverse Fourier integral.
// Values are not clipped.
std::vector<double> estimate_density_direct(std::span<const Point2> obs, const NoiseModel& model,
                                            const Bandwidth& bw,
                                            std::span<const Point2> eval_points,
                                            std::size_t quadrature_order = 256);

// Deconvolution kernel K_eta(u) for a single argument, same quadrature.
double deconvolution_kernel(const NoiseModel& model, const Bandwidth& bw, Point2 u,
                            std::size_t quadrature_order = 256);

// n^(-1 / (2 s + 2 (beta1 + beta2))), the same value on both axes.
double theoretical_bandwidth(long n, long s, std::array<double, 2> beta);

}  // namespace nkm
