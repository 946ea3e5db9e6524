#include "nkm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nkm {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void validate_counts(const GridCounts& counts) {
  if (!is_power_of_two(counts.m1) || !is_power_of_two(counts.m2) || counts.m1 < 4 || counts.m2 < 4) {
    throw std::invalid_argument("grid counts must be powers of two >= 4");
  }
}

Grid2D::Grid2D(Point2 origin, std::array<double, 2> spacing, GridCounts counts)
    : Grid2D(origin, spacing, counts, std::vector<double>(counts.size(), 0.0)) {}

Grid2D::Grid2D(Point2 origin, std::array<double, 2> spacing, GridCounts counts,
               std::vector<double> values)
    : origin_(origin), spacing_(spacing), counts_(counts), values_(std::move(values)) {
  validate_counts(counts_);
  if (!(spacing_[0] > 0.0 && spacing_[1] > 0.0) || !std::isfinite(spacing_[0]) ||
      !std::isfinite(spacing_[1])) {
    throw std::invalid_argument("grid spacing must be positive");
  }
  if (values_.size() != counts_.size()) {
    throw std::invalid_argument("grid values length does not match counts");
  }
}

Rectangle Grid2D::bounds() const {
  return {origin_, {node_x(counts_.m1 - 1), node_y(counts_.m2 - 1)}};
}

double Grid2D::diagonal() const {
  const Rectangle r = bounds();
  return std::hypot(r.hi.x - r.lo.x, r.hi.y - r.lo.y);
}

Grid2D Grid2D::with_values(std::vector<double> values) const {
  return Grid2D(origin_, spacing_, counts_, std::move(values));
}

namespace {

std::pair<double, double> axis_bounds(double lo, double hi, double margin) {
  if (hi - lo <= 0.0) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double side = hi - lo;
  return {lo - margin * side, hi + margin * side};
}

}  // namespace

Grid2D make_grid(std::span<const Point2> data, GridCounts counts, const BoundsPolicy& policy) {
  validate_counts(counts);
  if (!(policy.margin_fraction >= 0.0 && policy.margin_fraction <= 1.0)) {
    throw std::invalid_argument("margin_fraction must be in [0, 1]");
  }
  Rectangle rect;
  if (policy.explicit_bounds) {
    rect = *policy.explicit_bounds;
    if (!(rect.hi.x > rect.lo.x && rect.hi.y > rect.lo.y)) {
      throw std::invalid_argument("explicit bounds must have positive extent");
    }
  } else {
    if (data.empty()) {
      throw std::invalid_argument("empty input");
    }
    Point2 lo = data.front();
    Point2 hi = data.front();
    for (const Point2& p : data) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
    const auto [x0, x1] = axis_bounds(lo.x, hi.x, policy.margin_fraction);
    const auto [y0, y1] = axis_bounds(lo.y, hi.y, policy.margin_fraction);
    rect = {{x0, y0}, {x1, y1}};
  }
  const std::array<double, 2> spacing{(rect.hi.x - rect.lo.x) / static_cast<double>(counts.m1 - 1),
                                      (rect.hi.y - rect.lo.y) / static_cast<double>(counts.m2 - 1)};
  return Grid2D(rect.lo, spacing, counts);
}

namespace {

// Fractional node coordinate clamped to [0, m-1], split into the lower node
// and the weight of the upper node.
std::pair<std::size_t, double> locate(double coord, double origin, double step, std::size_t m) {
  const double top = static_cast<double>(m - 1);
  double f = (coord - origin) / step;
  if (!(f > 0.0)) {
    f = 0.0;
  } else if (f > top) {
    f = top;
  }
  auto lower = static_cast<std::size_t>(std::floor(f));
  if (lower >= m - 1) {
    lower = m - 2;
  }
  return {lower, f - static_cast<double>(lower)};
}

}  // namespace

Grid2D linear_bin(const Grid2D& grid, std::span<const Point2> points) {
  Grid2D out = grid.with_values(std::vector<double>(grid.counts().size(), 0.0));
  const auto& c = grid.counts();
  for (const Point2& p : points) {
    const auto [i, wx] = locate(p.x, grid.origin().x, grid.spacing()[0], c.m1);
    const auto [j, wy] = locate(p.y, grid.origin().y, grid.spacing()[1], c.m2);
    out.at(i, j) += (1.0 - wx) * (1.0 - wy);
    out.at(i + 1, j) += wx * (1.0 - wy);
    out.at(i, j + 1) += (1.0 - wx) * wy;
    out.at(i + 1, j + 1) += wx * wy;
  }
  return out;
}

double integrate_cells(const Grid2D& grid) {
  double sum = 0.0;
  for (double v : grid.values()) {
    sum += v;
  }
  return grid.cell_area() * sum;
}

NodeCoordinates node_coordinates(const Grid2D& grid) {
  const auto& c = grid.counts();
  NodeCoordinates out;
  out.xs.resize(c.size());
  out.ys.resize(c.size());
  for (std::size_t i = 0; i < c.m1; ++i) {
    for (std::size_t j = 0; j < c.m2; ++j) {
      out.xs[grid.index(i, j)] = grid.node_x(i);
      out.ys[grid.index(i, j)] = grid.node_y(j);
    }
  }
  return out;
}

}  // namespace nkm
