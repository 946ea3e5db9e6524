#include <limits>

#include "internal.hpp"

namespace nkm::simd {
namespace {

void scale_complex(std::complex<double>* data, const double* factor, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = {data[i].real() * factor[i], data[i].imag() * factor[i]};
  }
}

void butterfly_stage(std::complex<double>* data, std::size_t n, std::size_t half,
                     const std::complex<double>* twiddles) {
  for (std::size_t block = 0; block < n; block += 2 * half) {
    for (std::size_t j = 0; j < half; ++j) {
      const std::complex<double> a = data[block + j];
      const std::complex<double> b = data[block + j + half];
      const std::complex<double> w = twiddles[j];
      // Written out so no library complex multiply (with its inf/nan
      // recovery) sits in the hot loop.
      const double tr = w.real() * b.real() - w.imag() * b.imag();
      const double ti = w.real() * b.imag() + w.imag() * b.real();
      data[block + j] = {a.real() + tr, a.imag() + ti};
      data[block + j + half] = {a.real() - tr, a.imag() - ti};
    }
  }
}

void nearest_center(const double* xs, const double* ys, std::size_t n, const double* cx,
                    const double* cy, std::size_t k, std::int32_t* label, double* dist2) {
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::int32_t arg = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const double dx = xs[i] - cx[j];
      const double dy = ys[i] - cy[j];
      const double d = dx * dx + dy * dy;
      if (d < best) {
        best = d;
        arg = static_cast<std::int32_t>(j);
      }
    }
    label[i] = arg;
    dist2[i] = best;
  }
}

void weighted_moments(const double* xs, const double* ys, const double* w,
                      const std::int32_t* label, std::size_t n, std::size_t k, double* mass,
                      double* sx, double* sy) {
  for (std::size_t j = 0; j < k; ++j) {
    mass[j] = 0.0;
    sx[j] = 0.0;
    sy[j] = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(label[i]);
    mass[j] += w[i];
    sx[j] += w[i] * xs[i];
    sy[j] += w[i] * ys[i];
  }
}

double weighted_sum(const double* w, const double* v, std::size_t n) {
  // Neumaier summation.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = w[i] * v[i];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

constexpr Kernels kScalar{Isa::scalar, scale_complex, butterfly_stage, nearest_center,
                          weighted_moments, weighted_sum};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

}  // namespace nkm::simd
