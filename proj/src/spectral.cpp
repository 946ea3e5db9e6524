#include "nkm/spectral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nkm {

namespace {

void check_scale(double s1, double s2) {
  if (!(s1 >= 0.0 && s2 >= 0.0) || !std::isfinite(s1) || !std::isfinite(s2)) {
    throw std::invalid_argument("noise scale components must be nonnegative and finite");
  }
}

}  // namespace

NoiseModel NoiseModel::gaussian(double s1, double s2) {
  check_scale(s1, s2);
  return {NoiseKind::gaussian_diagonal, {s1, s2}};
}

NoiseModel NoiseModel::laplace(double s1, double s2) {
  check_scale(s1, s2);
  return {NoiseKind::laplace_diagonal, {s1, s2}};
}

std::string to_string(const NoiseModel& model) {
  std::ostringstream os;
  os.precision(17);
  switch (model.kind) {
    case NoiseKind::none:
      return "none";
    case NoiseKind::gaussian_diagonal:
      os << "gaussian:" << model.scale[0] << ',' << model.scale[1];
      break;
    case NoiseKind::laplace_diagonal:
      os << "laplace:" << model.scale[0] << ',' << model.scale[1];
      break;
  }
  return os.str();
}

double kernel_ft_1d(double t) {
  if (std::abs(t) > 1.0) {
    return 0.0;
  }
  const double u = 1.0 - t * t;
  return u * u * u;
}

double kernel_ft(Point2 t) { return kernel_ft_1d(t.x) * kernel_ft_1d(t.y); }

double noise_cf_axis(NoiseKind kind, double scale, double t) {
  switch (kind) {
    case NoiseKind::none:
      return 1.0;
    case NoiseKind::gaussian_diagonal:
      return std::exp(-0.5 * scale * scale * t * t);
    case NoiseKind::laplace_diagonal:
      return 1.0 / (1.0 + scale * scale * t * t);
  }
  return 1.0;
}

double noise_cf(const NoiseModel& model, Point2 t) {
  if (model.kind == NoiseKind::gaussian_diagonal) {
    // One exponential, so the joint value is exactly exp(-(s1^2 t1^2 + s2^2 t2^2) / 2).
    const double q = model.scale[0] * model.scale[0] * t.x * t.x +
                     model.scale[1] * model.scale[1] * t.y * t.y;
    return std::exp(-0.5 * q);
  }
  return noise_cf_axis(model.kind, model.scale[0], t.x) *
         noise_cf_axis(model.kind, model.scale[1], t.y);
}

double deconv_multiplier(const NoiseModel& model, const Bandwidth& bw, Point2 t) {
  const double numerator = kernel_ft({bw.first() * t.x, bw.second() * t.y});
  if (numerator == 0.0) {
    return 0.0;
  }
  return numerator / noise_cf(model, t);
}

}  // namespace nkm
