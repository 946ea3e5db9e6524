#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nkm/cluster.hpp"
#include "nkm/rng.hpp"
#include "nkm/spectral.hpp"
#include "nkm/types.hpp"

namespace nkm {

enum class Family { mod1, mod2 };

std::string to_string(Family f);
Family parse_family(const std::string& s);

// Mod1(u): two unit-covariance gaussians at (0,0) and (5,0), noise N(0, diag(0, u)).
// Mod2(u): three unit-covariance gaussians at (0,0), (a,b), (b,a) with
// (a,b) = (15 - (u-1)/2, 5 + (u-1)/2), noise N(0, diag(5, 5)).
struct Scenario {
  Family family = Family::mod1;
  int u = 1;

  std::size_t k() const { return family == Family::mod1 ? 2 : 3; }
  std::size_t default_n() const { return family == Family::mod1 ? 100 : 180; }
  std::vector<Point2> means() const;
  // Noise as the deconvolution step sees it (standard deviations per axis).
  NoiseModel noise() const;
  std::array<double, 2> noise_variance() const;
};

void validate_u(int u);

struct LabeledSample {
  std::vector<Point2> x;
  std::vector<Point2> z;
  std::vector<std::int32_t> y;
  std::uint64_t seed = 0;
};

LabeledSample sample_scenario(const Scenario& scenario, std::size_t n, std::uint64_t seed);
LabeledSample sample_mod1(int u, std::size_t n, std::uint64_t seed);
LabeledSample sample_mod2(int u, std::size_t n, std::uint64_t seed);

// Draws from the clean mixture only.
std::vector<Point2> sample_latent(const Scenario& scenario, std::size_t n, Rng& rng);

// Misclassification rate minimized over relabelings of the predicted
// clusters; k <= 4.
double matched_error_rate(std::span<const std::int32_t> truth, std::span<const std::int32_t> predicted,
                          std::size_t k);

// Fraction of latent points X_i whose nearest center disagrees with Y_i under
// the best label matching.
double clustering_risk(const Codebook& cb, const LabeledSample& sample);

// k distinct observed points chosen uniformly without replacement.
Codebook random_init(std::span<const Point2> obs, std::size_t k, Rng& rng);

// per_axis x per_axis log-spaced candidates spanning [0.1, 10] times
// sd_v * n^(-1/6) on each axis, in lexicographic order.
std::vector<Bandwidth> bandwidth_candidates(std::span<const Point2> obs, std::size_t per_axis = 20);

// sd_v * n^(-1/6), the center of the candidate range.
Bandwidth reference_bandwidth(std::span<const Point2> obs);

struct TuningResult {
  Bandwidth best{1.0, 1.0};
  double best_score = 0.0;
  // Score per candidate in candidate order; +inf where the fit failed.
  std::vector<double> scores;
};

// Fits noisy k-means once per candidate and keeps the bandwidth whose centers
// have the lowest total squared distance over the clean tuning sample; ties
// go to the lexicographically smallest bandwidth.
TuningResult tune_bandwidth(std::span<const Point2> obs, const NoiseModel& model,
                            std::span<const Bandwidth> candidates,
                            std::span<const Point2> tuning_sample, const Codebook& init,
                            const NoisyFitConfig& config = {});

struct ReplicationConfig {
  Scenario scenario;
  std::size_t n = 100;
  std::size_t R = 100;
  std::uint64_t seed = 0;
  // Unset means tune per replication on a fresh clean sample.
  std::optional<Bandwidth> bandwidth;
  std::size_t tuning_size = 1000;
  std::size_t candidates_per_axis = 20;
  NoisyFitConfig fit;
  std::size_t threads = 1;
};

struct ReplicationRecord {
  std::size_t replication = 0;
  Codebook init;
  Bandwidth bandwidth{1.0, 1.0};
  Codebook lloyd;
  Codebook noisy;
  double lloyd_risk = 0.0;
  double noisy_risk = 0.0;
};

struct RiskSummary {
  double mean = 0.0;
  double sd = 0.0;
  double ci_half_width = 0.0;
  std::size_t failures = 0;

  double ci_lo() const { return mean - ci_half_width; }
  double ci_hi() const { return mean + ci_half_width; }
};

// Mean, sample standard deviation (0 for a single run), 1.96 sd / sqrt(R)
// half-width and the number of risks above failure_threshold.
RiskSummary summarize_risks(std::span<const double> risks, double failure_threshold = 0.2);

struct ReplicationSummary {
  ReplicationConfig config;
  std::vector<ReplicationRecord> runs;
  RiskSummary lloyd;
  RiskSummary noisy;
};

ReplicationSummary run_replications(const ReplicationConfig& config);

}  // namespace nkm
