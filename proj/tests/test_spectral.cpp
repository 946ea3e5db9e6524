#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nkm/spectral.hpp"

using namespace nkm;

TEST_CASE("kernel transform") {
  CHECK(kernel_ft_1d(0.0) == 1.0);
  CHECK(kernel_ft_1d(0.5) == 0.421875);
  CHECK(kernel_ft_1d(-0.5) == 0.421875);
  CHECK(kernel_ft_1d(1.2) == 0.0);
  CHECK(kernel_ft_1d(1.0) == 0.0);
  CHECK(kernel_ft({0.5, 0.0}) == 0.421875);
  CHECK(kernel_ft({0.5, 0.5}) == 0.421875 * 0.421875);
}

TEST_CASE("noise characteristic functions") {
  const std::vector<NoiseModel> models{NoiseModel::none(), NoiseModel::gaussian(0.7, 2.0),
                                       NoiseModel::laplace(1.5, 0.3)};
  for (const auto& m : models) {
    CHECK(noise_cf(m, {0, 0}) == 1.0);
  }
  CHECK(noise_cf(NoiseModel::gaussian(1, 0), {1, 5}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(noise_cf(NoiseModel::laplace(1, 1), {1, 1}) == 0.25);
  CHECK(noise_cf(NoiseModel::none(), {3, -8}) == 1.0);
  CHECK_THROWS_AS(NoiseModel::gaussian(-1, 0), std::invalid_argument);
}

TEST_CASE("characteristic functions are even, positive and nonincreasing per axis") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (const auto& m : {NoiseModel::gaussian(0.8, 1.3), NoiseModel::laplace(0.6, 2.1)}) {
    for (int i = 0; i < 200; ++i) {
      const double a = u(gen);
      const double b = u(gen);
      const double c = noise_cf(m, {a, b});
      CHECK(c > 0.0);
      CHECK(c <= 1.0);
      CHECK(c == noise_cf(m, {-a, b}));
      CHECK(c == noise_cf(m, {a, -b}));
      CHECK(noise_cf(m, {a + 0.1, b}) <= c);
      CHECK(noise_cf(m, {a, b + 0.1}) <= c);
    }
  }
}

TEST_CASE("deconvolution multiplier") {
  const Bandwidth bw(0.5, 0.5);
  CHECK(deconv_multiplier(NoiseModel::gaussian(2, 3), bw, {0, 0}) == 1.0);
  const Bandwidth other(0.3, 1.7);
  for (const Point2 t : {Point2{1, 0.2}, Point2{-2, 0.5}, Point2{3.1, -0.1}}) {
    CHECK(deconv_multiplier(NoiseModel::none(), other, t) == kernel_ft({0.3 * t.x, 1.7 * t.y}));
  }
  CHECK(deconv_multiplier(NoiseModel::gaussian(0, 3), bw, {0, 1}) ==
        doctest::Approx(0.421875 * std::exp(4.5)).epsilon(1e-14));
}

TEST_CASE("multiplier has compact support and is continuous at its edge") {
  const Bandwidth bw(0.4, 0.8);
  const auto m = NoiseModel::laplace(1.0, 0.5);
  CHECK(deconv_multiplier(m, bw, {1.0 / 0.4 + 1e-9, 0}) == 0.0);
  CHECK(deconv_multiplier(m, bw, {0, 1.0 / 0.8 + 1e-9}) == 0.0);
  CHECK(deconv_multiplier(m, bw, {1.0 / 0.4 - 1e-6, 0}) < 1e-15);
  CHECK(deconv_multiplier(m, bw, {1.0 / 0.4 - 1e-3, 0.1}) > 0.0);
}

TEST_CASE("bandwidth validation") {
  CHECK_THROWS_AS(Bandwidth(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Bandwidth(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Bandwidth(1.0, INFINITY), std::invalid_argument);
}
