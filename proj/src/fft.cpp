#include "nkm/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nkm {

FftPlan::FftPlan(std::size_t n, const simd::Kernels& kernels) : n_(n), kernels_(&kernels) {
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("FFT length must be a power of two");
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) {
    ++bits;
  }
  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      r |= ((i >> b) & 1U) << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  forward_twiddles_.reserve(n);
  inverse_twiddles_.reserve(n);
  for (std::size_t half = 1; half < n; half *= 2) {
    for (std::size_t j = 0; j < half; ++j) {
      const double angle = -std::numbers::pi * static_cast<double>(j) / static_cast<double>(half);
      forward_twiddles_.emplace_back(std::cos(angle), std::sin(angle));
      inverse_twiddles_.emplace_back(std::cos(angle), -std::sin(angle));
    }
  }
}

void FftPlan::execute(std::span<std::complex<double>> data, FftDirection dir) const {
  if (data.size() != n_) {
    throw std::invalid_argument("FFT buffer length does not match plan");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) {
      std::swap(data[i], data[bitrev_[i]]);
    }
  }
  const auto& tw = dir == FftDirection::forward ? forward_twiddles_ : inverse_twiddles_;
  std::size_t offset = 0;
  for (std::size_t half = 1; half < n_; half *= 2) {
    kernels_->butterfly_stage(data.data(), n_, half, tw.data() + offset);
    offset += half;
  }
}

long signed_alias(std::size_t a, std::size_t m) {
  const auto sa = static_cast<long>(a);
  const auto sm = static_cast<long>(m);
  return sa < sm / 2 ? sa : sa - sm;
}

double angular_frequency(std::size_t a, std::size_t m, double step) {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_alias(a, m)) /
         (static_cast<double>(m) * step);
}

void fft2_inplace(std::span<std::complex<double>> data, GridCounts counts, FftDirection dir,
                  const simd::Kernels& kernels) {
  validate_counts(counts);
  if (data.size() != counts.size()) {
    throw std::invalid_argument("spectrum length does not match counts");
  }
  const FftPlan rows(counts.m2, kernels);
  for (std::size_t i = 0; i < counts.m1; ++i) {
    rows.execute(data.subspan(i * counts.m2, counts.m2), dir);
  }
  const FftPlan cols(counts.m1, kernels);
  std::vector<std::complex<double>> column(counts.m1);
  for (std::size_t j = 0; j < counts.m2; ++j) {
    for (std::size_t i = 0; i < counts.m1; ++i) {
      column[i] = data[i * counts.m2 + j];
    }
    cols.execute(column, dir);
    for (std::size_t i = 0; i < counts.m1; ++i) {
      data[i * counts.m2 + j] = column[i];
    }
  }
}

Spectrum2D dft2_forward(const Grid2D& grid, const simd::Kernels& kernels) {
  Spectrum2D out{grid.counts(), grid.spacing(), {}};
  const auto values = grid.values();
  out.entries.assign(values.begin(), values.end());
  fft2_inplace(out.entries, out.counts, FftDirection::forward, kernels);
  return out;
}

InverseResult dft2_inverse(const Spectrum2D& spectrum, const simd::Kernels& kernels) {
  std::vector<std::complex<double>> work = spectrum.entries;
  fft2_inplace(work, spectrum.counts, FftDirection::inverse, kernels);
  const double scale = 1.0 / static_cast<double>(spectrum.counts.size());
  InverseResult out;
  out.values.resize(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    out.values[i] = work[i].real() * scale;
    out.max_imag_residue = std::max(out.max_imag_residue, std::abs(work[i].imag() * scale));
  }
  return out;
}

}  // namespace nkm
