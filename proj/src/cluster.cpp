#include "nkm/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nkm/simd/kernels.hpp"

namespace nkm {

namespace {

struct CenterArrays {
  std::vector<double> x;
  std::vector<double> y;

  explicit CenterArrays(const Codebook& cb) {
    x.reserve(cb.k());
    y.reserve(cb.k());
    for (const Point2& c : cb.centers) {
      x.push_back(c.x);
      y.push_back(c.y);
    }
  }
};

struct PointArrays {
  std::vector<double> x;
  std::vector<double> y;

  explicit PointArrays(std::span<const Point2> pts) {
    x.reserve(pts.size());
    y.reserve(pts.size());
    for (const Point2& p : pts) {
      x.push_back(p.x);
      y.push_back(p.y);
    }
  }
  PointArrays(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {}
  std::size_t size() const { return x.size(); }
};

void check_codebook(const Codebook& cb) {
  if (cb.k() == 0) {
    throw std::invalid_argument("codebook must contain at least one center");
  }
  for (const Point2& c : cb.centers) {
    if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
      throw std::invalid_argument("codebook coordinates must be finite");
    }
  }
}

struct Nearest {
  Labels label;
  std::vector<double> dist2;
};

Nearest nearest(const PointArrays& pts, const Codebook& cb) {
  check_codebook(cb);
  const CenterArrays c(cb);
  Nearest out{Labels(pts.size()), std::vector<double>(pts.size())};
  simd::active().nearest_center(pts.x.data(), pts.y.data(), pts.size(), c.x.data(), c.y.data(),
                                cb.k(), out.label.data(), out.dist2.data());
  return out;
}

double max_displacement(const Codebook& a, const Codebook& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.k(); ++j) {
    d = std::max(d, std::sqrt(squared_distance(a.centers[j], b.centers[j])));
  }
  return d;
}

PointArrays grid_nodes(const Grid2D& grid) {
  NodeCoordinates nodes = node_coordinates(grid);
  return {std::move(nodes.xs), std::move(nodes.ys)};
}

// Shared body of update_centers; nodes are the density's node coordinates.
CenterUpdate update_on_nodes(const DensityEstimate& density, const PointArrays& nodes,
                             std::span<const std::int32_t> assignment, const Codebook& current) {
  const auto values = density.grid.values();
  if (assignment.size() != values.size()) {
    throw std::invalid_argument("assignment length does not match grid");
  }
  const std::size_t k = current.k();
  std::vector<double> mass(k);
  std::vector<double> sx(k);
  std::vector<double> sy(k);
  simd::active().weighted_moments(nodes.x.data(), nodes.y.data(), values.data(), assignment.data(),
                                  values.size(), k, mass.data(), sx.data(), sy.data());
  double total = 0.0;
  for (double m : mass) {
    total += m;
  }
  if (!(total > 0.0)) {
    throw std::runtime_error("degenerate density");
  }

  CenterUpdate out{current, 0};
  for (std::size_t j = 0; j < k; ++j) {
    if (mass[j] > 0.0) {
      out.codebook.centers[j] = {sx[j] / mass[j], sy[j] / mass[j]};
    }
  }
  const auto& h = density.grid.spacing();
  const double min_sep2 = std::max(h[0], h[1]) * std::max(h[0], h[1]);
  for (std::size_t j = 0; j < k; ++j) {
    if (mass[j] > 0.0) {
      continue;
    }
    ++out.reseed_events;
    double best = 0.0;
    std::size_t best_node = values.size();
    for (std::size_t n = 0; n < values.size(); ++n) {
      if (!(values[n] > best)) {
        continue;
      }
      const Point2 p{nodes.x[n], nodes.y[n]};
      bool far = true;
      for (std::size_t other = 0; other < k && far; ++other) {
        if (other != j && squared_distance(p, out.codebook.centers[other]) <= min_sep2) {
          far = false;
        }
      }
      if (far) {
        best = values[n];
        best_node = n;
      }
    }
    if (best_node < values.size()) {
      out.codebook.centers[j] = {nodes.x[best_node], nodes.y[best_node]};
    }
  }
  return out;
}

double distortion_on_nodes(const DensityEstimate& density, const PointArrays& nodes,
                           const Codebook& cb) {
  const Nearest nn = nearest(nodes, cb);
  const auto values = density.grid.values();
  return density.grid.cell_area() *
         simd::active().weighted_sum(values.data(), nn.dist2.data(), values.size());
}

std::size_t distinct_count(std::span<const Point2> points) {
  std::vector<std::pair<double, double>> v;
  v.reserve(points.size());
  for (const Point2& p : points) {
    v.emplace_back(p.x, p.y);
  }
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

}  // namespace

Labels assign_cells(const DensityEstimate& density, const Codebook& cb) {
  return nearest(grid_nodes(density.grid), cb).label;
}

CenterUpdate update_centers(const DensityEstimate& density, std::span<const std::int32_t> assignment,
                            const Codebook& current) {
  check_codebook(current);
  return update_on_nodes(density, grid_nodes(density.grid), assignment, current);
}

double deconv_distortion(const DensityEstimate& density, const Codebook& cb) {
  return distortion_on_nodes(density, grid_nodes(density.grid), cb);
}

FitResult fit_density(const DensityEstimate& density, const Codebook& init, const FitOptions& options) {
  check_codebook(init);
  const PointArrays nodes = grid_nodes(density.grid);
  const double tol = options.tol_factor * density.grid.diagonal();
  FitResult result;
  Codebook cb = init;
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    const Labels labels = nearest(nodes, cb).label;
    CenterUpdate upd = update_on_nodes(density, nodes, labels, cb);
    const double moved = max_displacement(cb, upd.codebook);
    cb = std::move(upd.codebook);
    result.reseed_events += upd.reseed_events;
    result.distortion_trace.push_back(distortion_on_nodes(density, nodes, cb));
    result.iterations = it + 1;
    if (moved <= tol) {
      result.converged = true;
      break;
    }
  }
  result.codebook = std::move(cb);
  return result;
}

FitResult noisy_kmeans_fit(std::span<const Point2> obs, const NoiseModel& model, const Bandwidth& bw,
                           const Codebook& init, const NoisyFitConfig& config) {
  const DensityEstimate density = estimate_density_fft(obs, model, bw, config.counts, config.bounds);
  FitResult result = fit_density(density, init, config.fit);
  result.assignments = assign_points(obs, result.codebook);
  return result;
}

FitResult lloyd_kmeans_fit(std::span<const Point2> points, const Codebook& init,
                           const FitOptions& options) {
  check_codebook(init);
  if (points.empty()) {
    throw std::invalid_argument("empty input");
  }
  const std::size_t k = init.k();
  if (k > distinct_count(points)) {
    throw std::invalid_argument("k exceeds the number of distinct points");
  }
  const PointArrays pts(points);
  const std::vector<double> ones(points.size(), 1.0);

  Point2 lo = points.front();
  Point2 hi = points.front();
  for (const Point2& p : points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double tol = options.tol_factor * std::hypot(hi.x - lo.x, hi.y - lo.y);
  const double inv_n = 1.0 / static_cast<double>(points.size());

  FitResult result;
  Codebook cb = init;
  Nearest nn = nearest(pts, cb);
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    std::vector<double> count(k);
    std::vector<double> sx(k);
    std::vector<double> sy(k);
    simd::active().weighted_moments(pts.x.data(), pts.y.data(), ones.data(), nn.label.data(),
                                    pts.size(), k, count.data(), sx.data(), sy.data());
    Codebook next = cb;
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j] > 0.0) {
        next.centers[j] = {sx[j] / count[j], sy[j] / count[j]};
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j] > 0.0) {
        continue;
      }
      // Empty cluster: move it to the point farthest from its nearest center.
      ++result.reseed_events;
      const Nearest cur = nearest(pts, next);
      const auto far = std::max_element(cur.dist2.begin(), cur.dist2.end());
      next.centers[j] = points[static_cast<std::size_t>(far - cur.dist2.begin())];
    }
    const double moved = max_displacement(cb, next);
    cb = std::move(next);
    nn = nearest(pts, cb);
    result.distortion_trace.push_back(
        inv_n * simd::active().weighted_sum(ones.data(), nn.dist2.data(), pts.size()));
    result.iterations = it + 1;
    if (moved <= tol) {
      result.converged = true;
      break;
    }
  }
  result.codebook = std::move(cb);
  result.assignments = std::move(nn.label);
  return result;
}

Labels assign_points(std::span<const Point2> points, const Codebook& cb) {
  return nearest(PointArrays(points), cb).label;
}

double empirical_distortion(std::span<const Point2> points, const Codebook& cb) {
  if (points.empty()) {
    throw std::invalid_argument("empty input");
  }
  const PointArrays pts(points);
  const Nearest nn = nearest(pts, cb);
  const std::vector<double> ones(points.size(), 1.0);
  return simd::active().weighted_sum(ones.data(), nn.dist2.data(), pts.size()) /
         static_cast<double>(points.size());
}

}  // namespace nkm
