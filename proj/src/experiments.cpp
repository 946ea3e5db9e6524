#include "nkm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace nkm {

std::string to_string(Family f) { return f == Family::mod1 ? "mod1" : "mod2"; }

Family parse_family(const std::string& s) {
  if (s == "mod1") {
    return Family::mod1;
  }
  if (s == "mod2") {
    return Family::mod2;
  }
  throw std::invalid_argument("family must be mod1 or mod2");
}

void validate_u(int u) {
  if (u < 1 || u > 10) {
    throw std::invalid_argument("u must be in 1..10");
  }
}

std::vector<Point2> Scenario::means() const {
  validate_u(u);
  if (family == Family::mod1) {
    return {{0.0, 0.0}, {5.0, 0.0}};
  }
  const double shift = static_cast<double>(u - 1) / 2.0;
  const double a = 15.0 - shift;
  const double b = 5.0 + shift;
  return {{0.0, 0.0}, {a, b}, {b, a}};
}

std::array<double, 2> Scenario::noise_variance() const {
  validate_u(u);
  if (family == Family::mod1) {
    return {0.0, static_cast<double>(u)};
  }
  return {5.0, 5.0};
}

NoiseModel Scenario::noise() const {
  const auto var = noise_variance();
  return NoiseModel::gaussian(std::sqrt(var[0]), std::sqrt(var[1]));
}

namespace {

Point2 draw_latent(const std::vector<Point2>& means, Rng& rng, std::int32_t& label) {
  label = static_cast<std::int32_t>(rng.below(means.size()));
  const Point2& m = means[static_cast<std::size_t>(label)];
  const double e1 = rng.normal();
  const double e2 = rng.normal();
  return {m.x + e1, m.y + e2};
}

}  // namespace

LabeledSample sample_scenario(const Scenario& scenario, std::size_t n, std::uint64_t seed) {
  const auto means = scenario.means();
  const auto var = scenario.noise_variance();
  const double s1 = std::sqrt(var[0]);
  const double s2 = std::sqrt(var[1]);
  Rng rng(seed, 0);
  LabeledSample out;
  out.seed = seed;
  out.x.reserve(n);
  out.z.reserve(n);
  out.y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t label = 0;
    const Point2 x = draw_latent(means, rng, label);
    const double e1 = s1 * rng.normal();
    const double e2 = s2 * rng.normal();
    out.x.push_back(x);
    out.z.push_back({x.x + e1, x.y + e2});
    out.y.push_back(label);
  }
  return out;
}

LabeledSample sample_mod1(int u, std::size_t n, std::uint64_t seed) {
  return sample_scenario({Family::mod1, u}, n, seed);
}

LabeledSample sample_mod2(int u, std::size_t n, std::uint64_t seed) {
  return sample_scenario({Family::mod2, u}, n, seed);
}

std::vector<Point2> sample_latent(const Scenario& scenario, std::size_t n, Rng& rng) {
  const auto means = scenario.means();
  std::vector<Point2> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t label = 0;
    out.push_back(draw_latent(means, rng, label));
  }
  return out;
}

double matched_error_rate(std::span<const std::int32_t> truth, std::span<const std::int32_t> predicted,
                          std::size_t k) {
  if (k > 4) {
    throw std::invalid_argument("permutation matching not supported");
  }
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("label lists differ in length");
  }
  if (truth.empty()) {
    return 0.0;
  }
  // Confusion counts, then the best of the k! matchings.
  std::vector<std::size_t> confusion(k * k, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    if (t >= k || p >= k) {
      throw std::invalid_argument("label out of range");
    }
    ++confusion[p * k + t];
  }
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t agree = 0;
    for (std::size_t p = 0; p < k; ++p) {
      agree += confusion[p * k + perm[p]];
    }
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(truth.size() - best) / static_cast<double>(truth.size());
}

double clustering_risk(const Codebook& cb, const LabeledSample& sample) {
  if (cb.k() > 4) {
    throw std::invalid_argument("permutation matching not supported");
  }
  const Labels predicted = assign_points(sample.x, cb);
  return matched_error_rate(sample.y, predicted, cb.k());
}

Codebook random_init(std::span<const Point2> obs, std::size_t k, Rng& rng) {
  if (k == 0 || k > obs.size()) {
    throw std::invalid_argument("cannot draw k initial centers from the observations");
  }
  std::vector<std::size_t> idx(obs.size());
  std::iota(idx.begin(), idx.end(), 0);
  Codebook cb;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t pick = j + static_cast<std::size_t>(rng.below(obs.size() - j));
    std::swap(idx[j], idx[pick]);
    cb.centers.push_back(obs[idx[j]]);
  }
  return cb;
}

namespace {

std::array<double, 2> axis_sd(std::span<const Point2> obs) {
  if (obs.size() < 2) {
    return {1.0, 1.0};
  }
  double mx = 0.0;
  double my = 0.0;
  for (const Point2& p : obs) {
    mx += p.x;
    my += p.y;
  }
  const auto n = static_cast<double>(obs.size());
  mx /= n;
  my /= n;
  double vx = 0.0;
  double vy = 0.0;
  for (const Point2& p : obs) {
    vx += (p.x - mx) * (p.x - mx);
    vy += (p.y - my) * (p.y - my);
  }
  std::array<double, 2> sd{std::sqrt(vx / (n - 1.0)), std::sqrt(vy / (n - 1.0))};
  for (double& s : sd) {
    if (!(s > 0.0)) {
      s = 1.0;
    }
  }
  return sd;
}

}  // namespace

Bandwidth reference_bandwidth(std::span<const Point2> obs) {
  if (obs.empty()) {
    throw std::invalid_argument("empty input");
  }
  const auto sd = axis_sd(obs);
  const double rate = std::pow(static_cast<double>(obs.size()), -1.0 / 6.0);
  return {sd[0] * rate, sd[1] * rate};
}

std::vector<Bandwidth> bandwidth_candidates(std::span<const Point2> obs, std::size_t per_axis) {
  if (per_axis == 0) {
    throw std::invalid_argument("empty grid");
  }
  const Bandwidth ref = reference_bandwidth(obs);
  auto axis_values = [per_axis](double center) {
    std::vector<double> v(per_axis);
    for (std::size_t i = 0; i < per_axis; ++i) {
      const double frac = per_axis == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(per_axis - 1);
      v[i] = center * std::pow(10.0, -1.0 + 2.0 * frac);
    }
    return v;
  };
  const auto l1 = axis_values(ref.first());
  const auto l2 = axis_values(ref.second());
  std::vector<Bandwidth> out;
  out.reserve(per_axis * per_axis);
  for (double a : l1) {
    for (double b : l2) {
      out.emplace_back(a, b);
    }
  }
  return out;
}

TuningResult tune_bandwidth(std::span<const Point2> obs, const NoiseModel& model,
                            std::span<const Bandwidth> candidates,
                            std::span<const Point2> tuning_sample, const Codebook& init,
                            const NoisyFitConfig& config) {
  if (candidates.empty()) {
    throw std::invalid_argument("empty grid");
  }
  if (tuning_sample.empty()) {
    throw std::invalid_argument("empty tuning sample");
  }
  const ObservedSpectrum spectrum(obs, config.counts, config.bounds);
  TuningResult out;
  out.scores.resize(candidates.size(), std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    try {
      const DensityEstimate density = spectrum.deconvolve(model, candidates[c]);
      const FitResult fit = fit_density(density, init, config.fit);
      out.scores[c] = empirical_distortion(tuning_sample, fit.codebook) *
                      static_cast<double>(tuning_sample.size());
    } catch (const std::runtime_error&) {
      // Overflowing multiplier or an all-zero estimate: not a usable candidate.
    }
  }
  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!std::isfinite(out.scores[c])) {
      continue;
    }
    if (!best || out.scores[c] < out.scores[*best] ||
        (out.scores[c] == out.scores[*best] && candidates[c] < candidates[*best])) {
      best = c;
    }
  }
  if (!best) {
    throw std::runtime_error("no bandwidth candidate produced a usable fit");
  }
  out.best = candidates[*best];
  out.best_score = out.scores[*best];
  return out;
}

RiskSummary summarize_risks(std::span<const double> risks, double failure_threshold) {
  RiskSummary s;
  if (risks.empty()) {
    return s;
  }
  const auto n = static_cast<double>(risks.size());
  for (double r : risks) {
    s.mean += r;
    if (r > failure_threshold) {
      ++s.failures;
    }
  }
  s.mean /= n;
  if (risks.size() > 1) {
    double ss = 0.0;
    for (double r : risks) {
      ss += (r - s.mean) * (r - s.mean);
    }
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  s.ci_half_width = 1.96 * s.sd / std::sqrt(n);
  return s;
}

namespace {

ReplicationRecord run_one(const ReplicationConfig& config, std::size_t r) {
  const std::uint64_t seed = config.seed + r;
  const LabeledSample sample = sample_scenario(config.scenario, config.n, seed);
  Rng init_rng(seed, 1);
  ReplicationRecord rec;
  rec.replication = r;
  rec.init = random_init(sample.z, config.scenario.k(), init_rng);

  const NoiseModel model = config.scenario.noise();
  if (config.bandwidth) {
    rec.bandwidth = *config.bandwidth;
  } else {
    Rng tuning_rng(seed, 2);
    const auto tuning = sample_latent(config.scenario, config.tuning_size, tuning_rng);
    const auto candidates = bandwidth_candidates(sample.z, config.candidates_per_axis);
    rec.bandwidth = tune_bandwidth(sample.z, model, candidates, tuning, rec.init, config.fit).best;
  }

  const FitResult lloyd = lloyd_kmeans_fit(sample.z, rec.init, config.fit.fit);
  const FitResult noisy = noisy_kmeans_fit(sample.z, model, rec.bandwidth, rec.init, config.fit);
  rec.lloyd = lloyd.codebook;
  rec.noisy = noisy.codebook;
  rec.lloyd_risk = clustering_risk(lloyd.codebook, sample);
  rec.noisy_risk = clustering_risk(noisy.codebook, sample);
  return rec;
}

}  // namespace

ReplicationSummary run_replications(const ReplicationConfig& config) {
  if (config.R < 1) {
    throw std::invalid_argument("R must be at least 1");
  }
  validate_u(config.scenario.u);
  if (config.n < config.scenario.k()) {
    throw std::invalid_argument("n must be at least k");
  }

  std::vector<std::optional<ReplicationRecord>> slots(config.R);
  std::vector<std::exception_ptr> errors(config.R);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < config.R; r = next++) {
      try {
        slots[r] = run_one(config, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, config.R);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  ReplicationSummary out;
  out.config = config;
  std::vector<double> lloyd;
  std::vector<double> noisy;
  for (auto& s : slots) {
    lloyd.push_back(s->lloyd_risk);
    noisy.push_back(s->noisy_risk);
    out.runs.push_back(std::move(*s));
  }
  out.lloyd = summarize_risks(lloyd);
  out.noisy = summarize_risks(noisy);
  return out;
}

}  // namespace nkm
