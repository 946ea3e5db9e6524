#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nkm/types.hpp"

namespace nkm {

struct GridCounts {
  std::size_t m1 = 0;
  std::size_t m2 = 0;

  std::size_t size() const { return m1 * m2; }
  friend bool operator==(const GridCounts&, const GridCounts&) = default;
};

bool is_power_of_two(std::size_t n);

// Throws std::invalid_argument unless both counts are powers of two >= 4.
void validate_counts(const GridCounts& counts);

struct Rectangle {
  Point2 lo;
  Point2 hi;
};

struct BoundsPolicy {
  double margin_fraction = 0.15;
  std::optional<Rectangle> explicit_bounds;
};

// Rectangular lattice of m1 x m2 nodes. values are row-major with the first
// axis as the slow index: values[i * m2 + j] sits at origin + (i*d1, j*d2).
class Grid2D {
public:
  Grid2D(Point2 origin, std::array<double, 2> spacing, GridCounts counts);
  Grid2D(Point2 origin, std::array<double, 2> spacing, GridCounts counts,
         std::vector<double> values);

  const Point2& origin() const { return origin_; }
  const std::array<double, 2>& spacing() const { return spacing_; }
  const GridCounts& counts() const { return counts_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  std::size_t index(std::size_t i, std::size_t j) const { return i * counts_.m2 + j; }
  double at(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }
  double& at(std::size_t i, std::size_t j) { return values_[index(i, j)]; }

  double node_x(std::size_t i) const { return origin_.x + static_cast<double>(i) * spacing_[0]; }
  double node_y(std::size_t j) const { return origin_.y + static_cast<double>(j) * spacing_[1]; }
  Point2 node(std::size_t i, std::size_t j) const { return {node_x(i), node_y(j)}; }

  Rectangle bounds() const;
  double cell_area() const { return spacing_[0] * spacing_[1]; }
  double diagonal() const;

  Grid2D with_values(std::vector<double> values) const;

private:
  Point2 origin_;
  std::array<double, 2> spacing_;
  GridCounts counts_;
  std::vector<double> values_;
};

// Zero-valued grid covering the bounding box of data (expanded by the policy
// margin) or the policy's explicit bounds.
Grid2D make_grid(std::span<const Point2> data, GridCounts counts, const BoundsPolicy& policy = {});

// Bilinear binning of unit masses onto the nodes of grid. Points outside the
// rectangle are clamped onto its boundary first.
Grid2D linear_bin(const Grid2D& grid, std::span<const Point2> points);

// Rectangle rule on nodes: d1 * d2 * sum(values).
double integrate_cells(const Grid2D& grid);

// Node coordinates in storage order; used by the cluster kernels.
struct NodeCoordinates {
  std::vector<double> xs;
  std::vector<double> ys;
};
NodeCoordinates node_coordinates(const Grid2D& grid);

}  // namespace nkm
