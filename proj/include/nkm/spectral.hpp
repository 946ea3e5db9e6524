#pragma once

#include <array>
#include <string>

#include "nkm/types.hpp"

namespace nkm {

enum class NoiseKind { none, gaussian_diagonal, laplace_diagonal };

// Zero-mean additive error with independent coordinates. scale holds standard
// deviations (gaussian) or Laplace scale parameters; ignored for none.
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  std::array<double, 2> scale{0.0, 0.0};

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double s1, double s2);
  static NoiseModel laplace(double s1, double s2);

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

std::string to_string(const NoiseModel& model);

// Fourier transform of the one-dimensional smoothing kernel:
// (1 - t^2)^3 on [-1, 1], zero outside.
double kernel_ft_1d(double t);

// Product kernel transform kernel_ft_1d(t1) * kernel_ft_1d(t2).
double kernel_ft(Point2 t);

// One-axis characteristic function of the noise.
double noise_cf_axis(NoiseKind kind, double scale, double t);

// Characteristic function of the noise at angular frequency t; real and in (0, 1].
double noise_cf(const NoiseModel& model, Point2 t);

// kernel_ft(lambda * t) / noise_cf(t): the Fourier multiplier that turns a
// histogram density of the observations into the deconvolution estimate.
double deconv_multiplier(const NoiseModel& model, const Bandwidth& bw, Point2 t);

}  // namespace nkm
