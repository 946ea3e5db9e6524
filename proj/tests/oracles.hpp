#pragma once

// Brute-force reference computations used only by the tests. They share no
// code with the library paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "nkm/types.hpp"

namespace nkm::oracle {

// O(m^2) 2-D DFT with exp(-i 2 pi (a i / m1 + b j / m2)).
inline std::vector<std::complex<double>> direct_dft2(const std::vector<double>& v, std::size_t m1,
                                                     std::size_t m2) {
  std::vector<std::complex<double>> out(m1 * m2);
  for (std::size_t a = 0; a < m1; ++a) {
    for (std::size_t b = 0; b < m2; ++b) {
      long double re = 0.0L;
      long double im = 0.0L;
      for (std::size_t i = 0; i < m1; ++i) {
        for (std::size_t j = 0; j < m2; ++j) {
          const long double phase = -2.0L * std::numbers::pi_v<long double> *
                                    (static_cast<long double>((a * i) % m1) / m1 +
                                     static_cast<long double>((b * j) % m2) / m2);
          re += v[i * m2 + j] * std::cos(phase);
          im += v[i * m2 + j] * std::sin(phase);
        }
      }
      out[a * m2 + b] = {static_cast<double>(re), static_cast<double>(im)};
    }
  }
  return out;
}

inline std::int32_t nearest_scan(const Point2& p, const std::vector<Point2>& centers) {
  std::int32_t arg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double d = (p.x - centers[j].x) * (p.x - centers[j].x) + (p.y - centers[j].y) * (p.y - centers[j].y);
    if (d < best) {
      best = d;
      arg = static_cast<std::int32_t>(j);
    }
  }
  return arg;
}

inline std::vector<Point2> random_points(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point2> pts(n);
  for (auto& p : pts) {
    p = {u(gen), u(gen)};
  }
  return pts;
}

}  // namespace nkm::oracle
