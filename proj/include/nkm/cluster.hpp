#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nkm/density.hpp"
#include "nkm/types.hpp"

namespace nkm {

using Labels = std::vector<std::int32_t>;

struct FitOptions {
  std::size_t max_iter = 100;
  // Stop when no center moves farther than tol_factor times the domain
  // diagonal (grid diagonal for noisy k-means, data bounding box for Lloyd).
  double tol_factor = 1e-6;
};

struct FitResult {
  Codebook codebook;
  std::size_t iterations = 0;
  std::vector<double> distortion_trace;
  bool converged = false;
  std::size_t reseed_events = 0;
  // Nearest-center labels of the points the fit was asked to partition.
  Labels assignments;
};

// Nearest center for every grid node, ties to the lowest index.
Labels assign_cells(const DensityEstimate& density, const Codebook& cb);

struct CenterUpdate {
  Codebook codebook;
  std::size_t reseed_events = 0;
};

// Density-weighted mean of node coordinates per cell. A cluster without mass
// is moved to the densest node farther than one grid step from every other
// center (it keeps its position when no such node carries mass).
CenterUpdate update_centers(const DensityEstimate& density, std::span<const std::int32_t> assignment,
                            const Codebook& current);

// d1 * d2 * sum over nodes of min_j |x - c_j|^2 f(x).
double deconv_distortion(const DensityEstimate& density, const Codebook& cb);

// Lloyd-style iterations on a fixed density grid.
FitResult fit_density(const DensityEstimate& density, const Codebook& init,
                      const FitOptions& options = {});

struct NoisyFitConfig {
  GridCounts counts{128, 128};
  BoundsPolicy bounds;
  FitOptions fit;
};

// Deconvolution estimate of the latent density, then iterations on it; the
// observations are labelled by the final centers.
FitResult noisy_kmeans_fit(std::span<const Point2> obs, const NoiseModel& model, const Bandwidth& bw,
                           const Codebook& init, const NoisyFitConfig& config = {});

FitResult lloyd_kmeans_fit(std::span<const Point2> points, const Codebook& init,
                           const FitOptions& options = {});

Labels assign_points(std::span<const Point2> points, const Codebook& cb);

// Mean squared distance to the nearest center.
double empirical_distortion(std::span<const Point2> points, const Codebook& cb);

}  // namespace nkm
