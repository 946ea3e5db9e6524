#include "nkm/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "nkm/quadrature.hpp"

namespace nkm {

ObservedSpectrum::ObservedSpectrum(std::span<const Point2> obs, GridCounts counts,
                                   const BoundsPolicy& policy, std::size_t padding_factor,
                                   const simd::Kernels& kernels)
    : n_(obs.size()),
      padding_(padding_factor),
      histogram_(obs.empty() ? throw std::invalid_argument("empty input")
                             : linear_bin(make_grid(obs, counts, policy), obs)),
      kernels_(&kernels) {
  // Histogram density: node masses per unit area, integrating to one.
  const double scale = 1.0 / (static_cast<double>(n_) * histogram_.cell_area());
  for (double& v : histogram_.mutable_values()) {
    v *= scale;
  }
  if (!is_power_of_two(padding_)) {
    throw std::invalid_argument("padding factor must be a power of two");
  }
  const GridCounts& c = histogram_.counts();
  const GridCounts padded{c.m1 * padding_, c.m2 * padding_};
  spectrum_.counts = padded;
  spectrum_.spacing = histogram_.spacing();
  spectrum_.entries.assign(padded.size(), 0.0);
  for (std::size_t i = 0; i < c.m1; ++i) {
    for (std::size_t j = 0; j < c.m2; ++j) {
      spectrum_.entries[i * padded.m2 + j] = histogram_.at(i, j);
    }
  }
  fft2_inplace(spectrum_.entries, padded, FftDirection::forward, *kernels_);
}

DensityEstimate ObservedSpectrum::deconvolve(const NoiseModel& model, const Bandwidth& bw,
                                             const DensityOptions& options) const {
  const GridCounts& c = spectrum_.counts;
  const auto& h = histogram_.spacing();
  std::vector<std::string> warnings;
  for (std::size_t axis = 0; axis < 2; ++axis) {
    const std::size_t m = axis == 0 ? c.m1 : c.m2;
    const double nyquist = std::numbers::pi / h[axis];
    const double lowest = 2.0 * std::numbers::pi / (static_cast<double>(m) * h[axis]);
    const std::string name = axis == 0 ? "axis 1" : "axis 2";
    if (bw[axis] * nyquist < 1.0) {
      warnings.push_back("bandwidth below grid resolution on " + name);
    }
    if (bw[axis] * lowest > 1.0) {
      warnings.push_back("bandwidth above grid extent on " + name +
                         ": only the zero frequency survives");
    }
  }

  std::vector<double> freq1(c.m1);
  std::vector<double> freq2(c.m2);
  for (std::size_t a = 0; a < c.m1; ++a) {
    freq1[a] = angular_frequency(a, c.m1, h[0]);
  }
  for (std::size_t b = 0; b < c.m2; ++b) {
    freq2[b] = angular_frequency(b, c.m2, h[1]);
  }
  std::vector<double> multiplier(c.size());
  for (std::size_t a = 0; a < c.m1; ++a) {
    for (std::size_t b = 0; b < c.m2; ++b) {
      const double m = deconv_multiplier(model, bw, {freq1[a], freq2[b]});
      if (!std::isfinite(m)) {
        throw std::runtime_error("deconvolution multiplier overflow; bandwidth too small for the noise level");
      }
      multiplier[a * c.m2 + b] = m;
    }
  }

  Spectrum2D work = spectrum_;
  kernels_->scale_complex(work.entries.data(), multiplier.data(), work.entries.size());
  InverseResult inv = dft2_inverse(work, *kernels_);

  const GridCounts& out_counts = histogram_.counts();
  std::vector<double> values(out_counts.size());
  double raw_min = 0.0;
  for (std::size_t i = 0; i < out_counts.m1; ++i) {
    for (std::size_t j = 0; j < out_counts.m2; ++j) {
      double v = inv.values[i * c.m2 + j];
      raw_min = std::min(raw_min, v);
      if (options.clip) {
        v = std::max(v, 0.0);
      }
      values[i * out_counts.m2 + j] = v;
    }
  }
  DensityEstimate out{histogram_.with_values(std::move(values)), raw_min, options.clip,
                      inv.max_imag_residue, std::move(warnings)};
  return out;
}

DensityEstimate estimate_density_fft(std::span<const Point2> obs, const NoiseModel& model,
                                     const Bandwidth& bw, GridCounts counts,
                                     const BoundsPolicy& policy, const DensityOptions& options) {
  return ObservedSpectrum(obs, counts, policy, options.padding_factor).deconvolve(model, bw, options);
}

namespace {

// (1 / 2pi) * integral over [-1, 1] of cos(t u) F[K1](t) / cf(t / lambda) dt.
class AxisKernel {
public:
  AxisKernel(NoiseKind kind, double scale, double lambda, const GaussLegendre& rule) {
    nodes_ = rule.nodes;
    weighted_.resize(rule.nodes.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = rule.nodes[q];
      weighted_[q] = rule.weights[q] * kernel_ft_1d(t) / noise_cf_axis(kind, scale, t / lambda);
    }
  }

  double operator()(double u) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
      sum += weighted_[q] * std::cos(nodes_[q] * u);
    }
    return sum / (2.0 * std::numbers::pi);
  }

private:
  std::vector<double> nodes_;
  std::vector<double> weighted_;
};

// Gaussian and Laplace characteristic functions factor over axes, so the
// tensor-product rule reduces exactly to a product of one-axis rules.
std::array<AxisKernel, 2> axis_kernels(const NoiseModel& model, const Bandwidth& bw,
                                       std::size_t order) {
  const GaussLegendre rule = gauss_legendre(order);
  return {AxisKernel(model.kind, model.scale[0], bw.first(), rule),
          AxisKernel(model.kind, model.scale[1], bw.second(), rule)};
}

}  // namespace

double deconvolution_kernel(const NoiseModel& model, const Bandwidth& bw, Point2 u,
                            std::size_t quadrature_order) {
  const auto k = axis_kernels(model, bw, quadrature_order);
  return k[0](u.x) * k[1](u.y);
}

std::vector<double> estimate_density_direct(std::span<const Point2> obs, const NoiseModel& model,
                                            const Bandwidth& bw,
                                            std::span<const Point2> eval_points,
                                            std::size_t quadrature_order) {
  if (obs.empty()) {
    throw std::invalid_argument("empty input");
  }
  const auto k = axis_kernels(model, bw, quadrature_order);

  // Evaluation points usually share coordinates (grid nodes); evaluate each
  // distinct coordinate once per observation.
  std::map<double, std::size_t> xs_index;
  std::map<double, std::size_t> ys_index;
  for (const Point2& p : eval_points) {
    xs_index.emplace(p.x, 0);
    ys_index.emplace(p.y, 0);
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (auto& [x, idx] : xs_index) {
    idx = xs.size();
    xs.push_back(x);
  }
  for (auto& [y, idx] : ys_index) {
    idx = ys.size();
    ys.push_back(y);
  }
  std::vector<std::size_t> ex(eval_points.size());
  std::vector<std::size_t> ey(eval_points.size());
  for (std::size_t e = 0; e < eval_points.size(); ++e) {
    ex[e] = xs_index.at(eval_points[e].x);
    ey[e] = ys_index.at(eval_points[e].y);
  }

  std::vector<double> out(eval_points.size(), 0.0);
  std::vector<double> kx(xs.size());
  std::vector<double> ky(ys.size());
  for (const Point2& z : obs) {
    for (std::size_t a = 0; a < xs.size(); ++a) {
      kx[a] = k[0]((z.x - xs[a]) / bw.first());
    }
    for (std::size_t b = 0; b < ys.size(); ++b) {
      ky[b] = k[1]((z.y - ys[b]) / bw.second());
    }
    for (std::size_t e = 0; e < eval_points.size(); ++e) {
      out[e] += kx[ex[e]] * ky[ey[e]];
    }
  }
  const double scale = 1.0 / (static_cast<double>(obs.size()) * bw.first() * bw.second());
  for (double& v : out) {
    v *= scale;
  }
  return out;
}

double theoretical_bandwidth(long n, long s, std::array<double, 2> beta) {
  if (n < 1 || s < 1 || !(beta[0] > 0.0) || !(beta[1] > 0.0)) {
    throw std::invalid_argument("theoretical_bandwidth requires n >= 1, s >= 1, beta > 0");
  }
  const double exponent = -1.0 / (2.0 * static_cast<double>(s) + 2.0 * (beta[0] + beta[1]));
  return std::pow(static_cast<double>(n), exponent);
}

}  // namespace nkm
