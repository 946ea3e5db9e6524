#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nkm/density.hpp"
#include "nkm/experiments.hpp"
#include "nkm/quadrature.hpp"

using namespace nkm;

namespace {

std::vector<Point2> grid_nodes(const Grid2D& g) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < g.counts().m1; ++i)
    for (std::size_t j = 0; j < g.counts().m2; ++j) out.push_back(g.node(i, j));
  return out;
}

double total_variation(const Grid2D& g) {
  double tv = 0;
  for (std::size_t i = 0; i < g.counts().m1; ++i)
    for (std::size_t j = 0; j < g.counts().m2; ++j) {
      if (i + 1 < g.counts().m1) tv += std::abs(g.at(i + 1, j) - g.at(i, j));
      if (j + 1 < g.counts().m2) tv += std::abs(g.at(i, j + 1) - g.at(i, j));
    }
  return tv;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("Gauss-Legendre rule") {
  const GaussLegendre r = gauss_legendre(256);
  double w = 0, x2 = 0, x10 = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    w += r.weights[i];
    x2 += r.weights[i] * r.nodes[i] * r.nodes[i];
    x10 += r.weights[i] * std::pow(r.nodes[i], 10);
  }
  CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(x10 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
  const GaussLegendre one = gauss_legendre(1);
  CHECK(one.nodes[0] == doctest::Approx(0.0));
  CHECK(one.weights[0] == doctest::Approx(2.0));
}

TEST_CASE("deconvolution kernel values") {
  // (integral of (1 - t^2)^3 over [-1, 1])^2 / (2 pi)^2 = (32/35)^2 / (2 pi)^2,
  // evaluated independently with adaptive quadrature.
  CHECK(deconvolution_kernel(NoiseModel::none(), {1, 1}, {0, 0}) ==
        doctest::Approx(0.02117405960199058).epsilon(1e-12));
  // One-axis values for gaussian s = sqrt(3), lambda = 0.7 at u = 0 and 2.5
  // (second axis noiseless, u = 0 there), also from adaptive quadrature.
  const double noiseless0 = std::sqrt(0.02117405960199058);
  const auto m = NoiseModel::gaussian(std::sqrt(3.0), 0.0);
  CHECK(deconvolution_kernel(m, {0.7, 0.7}, {0, 0}) ==
        doctest::Approx(0.22798803001228404 * noiseless0).epsilon(1e-11));
  CHECK(deconvolution_kernel(m, {0.7, 0.7}, {2.5, 0}) ==
        doctest::Approx(0.11597343481748892 * noiseless0).epsilon(1e-11));
}

TEST_CASE("direct estimate of a single observation") {
  const std::vector<Point2> obs{{1.0, -2.0}};
  const Bandwidth bw(0.6, 1.3);
  const auto m = NoiseModel::laplace(0.4, 0.2);
  const std::vector<Point2> at{{1.0, -2.0}};
  const auto v = estimate_density_direct(obs, m, bw, at);
  CHECK(v[0] == doctest::Approx(deconvolution_kernel(m, bw, {0, 0}) / (0.6 * 1.3)).epsilon(1e-13));
}

TEST_CASE("theoretical bandwidth") {
  CHECK(theoretical_bandwidth(1, 3, {0.5, 2}) == 1.0);
  CHECK(theoretical_bandwidth(100, 1, {1, 1}) == doctest::Approx(0.4641588833612779).epsilon(1e-14));
  CHECK(theoretical_bandwidth(10000, 2, {2, 2}) == doctest::Approx(0.4641588833612779).epsilon(1e-14));
  CHECK_THROWS_AS(theoretical_bandwidth(0, 1, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_bandwidth(10, 0, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_bandwidth(10, 1, {0, 1}), std::invalid_argument);
}

TEST_CASE("fft estimate matches the quadrature oracle") {
  const auto sample = sample_mod1(3, 50, 21);
  for (const auto& model : {NoiseModel::gaussian(0, 3), NoiseModel::laplace(0.5, 1.0)}) {
    CAPTURE(to_string(model));
    const Bandwidth bw(0.7, 0.7);
    const DensityEstimate fft =
        estimate_density_fft(sample.z, model, bw, {256, 256}, {}, {.clip = false});
    const auto direct = estimate_density_direct(sample.z, model, bw, grid_nodes(fft.grid));
    double vmax = 0;
    for (double v : direct) vmax = std::max(vmax, v);
    const double err = max_abs_diff(fft.grid.values(), direct);
    MESSAGE("max |fft - direct| / max(direct) = " << err / vmax);
    CHECK(err <= 0.01 * vmax);
  }
}

TEST_CASE("symmetric data gives a symmetric estimate") {
  std::vector<Point2> obs{{-2, -1}, {2, 1}, {-1, 2}, {1, -2}, {0.5, 0.3}, {-0.5, -0.3}};
  const DensityEstimate d = estimate_density_fft(obs, NoiseModel::none(), {0.8, 0.8}, {64, 64});
  // Point reflection through the centre maps node (i, j) to (m-1-i, m-1-j).
  double vmax = 0, err = 0;
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j) {
      vmax = std::max(vmax, d.grid.at(i, j));
      err = std::max(err, std::abs(d.grid.at(i, j) - d.grid.at(63 - i, 63 - j)));
    }
  CHECK(err <= 1e-9 * std::max(1.0, vmax));
}

TEST_CASE("huge bandwidth leaves only the zero frequency") {
  const std::vector<Point2> obs{{0, 0}, {1, 3}, {2, 1}, {0.3, 0.4}};
  for (std::size_t pad : {1u, 4u}) {
    CAPTURE(pad);
    const DensityEstimate d = estimate_density_fft(obs, NoiseModel::none(), {1e3, 1e3}, {16, 16}, {},
                                                   {.clip = true, .padding_factor = pad});
    // Node-mass mean over the (padded) periodic lattice.
    const double mean = 1.0 / (d.grid.cell_area() * 256.0 * static_cast<double>(pad * pad));
    for (double v : d.grid.values()) CHECK(v == doctest::Approx(mean).epsilon(1e-12));
    bool warned = false;
    for (const auto& w : d.warnings) warned = warned || w.find("only the zero frequency") != std::string::npos;
    CHECK(warned);
  }
}

TEST_CASE("tiny bandwidth warns about grid resolution") {
  const std::vector<Point2> obs{{0, 0}, {1, 3}};
  const DensityEstimate d = estimate_density_fft(obs, NoiseModel::none(), {1e-3, 1e-3}, {16, 16});
  bool warned = false;
  for (const auto& w : d.warnings) warned = warned || w.find("below grid resolution") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("approximate normalization without noise") {
  const auto sample = sample_mod1(1, 200, 4);
  BoundsPolicy wide;
  wide.margin_fraction = 0.5;
  const DensityEstimate d =
      estimate_density_fft(sample.x, NoiseModel::none(), {0.5, 0.5}, {128, 128}, wide, {.clip = false});
  const double mass = integrate_cells(d.grid);
  CHECK(mass >= 0.97);
  CHECK(mass <= 1.03);
}

TEST_CASE("larger bandwidth smooths more") {
  const auto sample = sample_mod1(2, 80, 8);
  double prev = INFINITY;
  for (double l : {0.3, 0.6, 1.2}) {
    const DensityEstimate d = estimate_density_fft(sample.x, NoiseModel::none(), {l, l}, {128, 128});
    const double tv = total_variation(d.grid);
    CHECK(tv <= prev);
    prev = tv;
  }
}

TEST_CASE("clipping, determinism and sanity band") {
  const auto sample = sample_mod1(6, 100, 12);
  const DensityEstimate a = estimate_density_fft(sample.z, NoiseModel::gaussian(0, std::sqrt(6.0)), {0.6, 0.9}, {128, 128});
  const DensityEstimate b = estimate_density_fft(sample.z, NoiseModel::gaussian(0, std::sqrt(6.0)), {0.6, 0.9}, {128, 128});
  CHECK(a.clipped);
  CHECK(a.raw_min < 0.0);
  for (double v : a.grid.values()) CHECK(v >= 0.0);
  CHECK(std::equal(a.grid.values().begin(), a.grid.values().end(), b.grid.values().begin()));
  const double mass = integrate_cells(a.grid);
  CHECK(mass >= 0.5);
  CHECK(mass <= 1.5);
  CHECK(a.max_imag_residue < 1e-12);
}

TEST_CASE("errors") {
  const std::vector<Point2> none;
  CHECK_THROWS_AS(estimate_density_fft(none, NoiseModel::none(), {1, 1}, {16, 16}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_density_direct(none, NoiseModel::none(), {1, 1}, none), std::invalid_argument);
  const std::vector<Point2> obs{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(estimate_density_fft(obs, NoiseModel::none(), {1, 1}, {12, 16}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_density_fft(obs, NoiseModel::gaussian(50, 50), {1e-3, 1e-3}, {64, 64}),
                  std::runtime_error);
}
