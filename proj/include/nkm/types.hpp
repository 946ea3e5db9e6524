#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nkm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double squared_distance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

using PointList = std::vector<Point2>;

// Per-axis positive smoothing parameter.
class Bandwidth {
public:
  Bandwidth(double lambda1, double lambda2) : l1_(lambda1), l2_(lambda2) {
    if (!(std::isfinite(l1_) && std::isfinite(l2_) && l1_ > 0.0 && l2_ > 0.0)) {
      throw std::invalid_argument("bandwidth components must be positive and finite");
    }
  }

  double first() const { return l1_; }
  double second() const { return l2_; }
  double operator[](std::size_t axis) const { return axis == 0 ? l1_ : l2_; }

  friend bool operator==(const Bandwidth&, const Bandwidth&) = default;
  friend auto operator<=>(const Bandwidth&, const Bandwidth&) = default;

private:
  double l1_;
  double l2_;
};

// Ordered list of k centers.
struct Codebook {
  std::vector<Point2> centers;

  Codebook() = default;
  explicit Codebook(std::vector<Point2> c) : centers(std::move(c)) {}

  std::size_t k() const { return centers.size(); }
  friend bool operator==(const Codebook&, const Codebook&) = default;
};

}  // namespace nkm
