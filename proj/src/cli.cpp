#include "nkm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>

#include "nkm/cluster.hpp"
#include "nkm/density.hpp"
#include "nkm/experiments.hpp"
#include "nkm/io.hpp"

namespace nkm::cli {

namespace {

// Raised for anything the user can fix by changing the invocation.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RawOptions {
  std::string family = "mod1";
  std::string u = "1";
  std::optional<std::size_t> n;
  std::size_t R = 100;
  std::optional<std::size_t> k;
  std::string grid = "128";
  std::optional<std::string> bandwidth;
  std::optional<std::string> noise;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::optional<std::string> input;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::string algorithm = "noisy";
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    parts.push_back(cur);
  }
  if (!s.empty() && s.back() == sep) {
    parts.emplace_back();
  }
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: '" + s + "'");
  }
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& what) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) {
    throw UsageError(what + " expects two comma-separated numbers");
  }
  return {to_double(parts[0], what), to_double(parts[1], what)};
}

std::vector<int> parse_u_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    int v = 0;
    try {
      std::size_t pos = 0;
      v = std::stoi(part, &pos);
      if (pos != part.size()) {
        throw std::invalid_argument(part);
      }
    } catch (const std::exception&) {
      throw UsageError("u must be in 1..10");
    }
    if (v < 1 || v > 10) {
      throw UsageError("u must be in 1..10");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw UsageError("u must be in 1..10");
  }
  return out;
}

GridCounts parse_grid(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.empty() || parts.size() > 2) {
    throw UsageError("--grid expects INT or INT,INT");
  }
  std::vector<std::size_t> v;
  for (const auto& p : parts) {
    try {
      std::size_t pos = 0;
      const long long x = std::stoll(p, &pos);
      if (pos != p.size() || x < 0) {
        throw std::invalid_argument(p);
      }
      v.push_back(static_cast<std::size_t>(x));
    } catch (const std::exception&) {
      throw UsageError("--grid expects INT or INT,INT");
    }
  }
  GridCounts c{v[0], v.size() == 2 ? v[1] : v[0]};
  if (!is_power_of_two(c.m1) || !is_power_of_two(c.m2) || c.m1 < 4 || c.m2 < 4) {
    throw UsageError("grid counts must be powers of two >= 4");
  }
  return c;
}

NoiseModel parse_noise(const std::string& s) {
  if (s == "none") {
    return NoiseModel::none();
  }
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    throw UsageError("--noise expects none, gaussian:F,F or laplace:F,F");
  }
  const std::string kind = s.substr(0, colon);
  const auto [a, b] = parse_pair(s.substr(colon + 1), "--noise");
  if (a < 0.0 || b < 0.0) {
    throw UsageError("noise scales must be nonnegative");
  }
  if (kind == "gaussian") {
    return NoiseModel::gaussian(a, b);
  }
  if (kind == "laplace") {
    return NoiseModel::laplace(a, b);
  }
  if (kind == "none") {
    return NoiseModel::none();
  }
  throw UsageError("--noise expects none, gaussian:F,F or laplace:F,F");
}

enum class BandwidthMode { fixed, tuned, reference };

struct BandwidthChoice {
  BandwidthMode mode = BandwidthMode::reference;
  std::optional<Bandwidth> value;
};

BandwidthChoice parse_bandwidth(const std::optional<std::string>& s, BandwidthMode fallback) {
  if (!s) {
    return {fallback, std::nullopt};
  }
  if (*s == "tuned") {
    return {BandwidthMode::tuned, std::nullopt};
  }
  if (*s == "reference") {
    return {BandwidthMode::reference, std::nullopt};
  }
  const auto [a, b] = parse_pair(*s, "--bandwidth");
  if (!(a > 0.0 && b > 0.0)) {
    throw UsageError("bandwidth components must be positive");
  }
  return {BandwidthMode::fixed, Bandwidth(a, b)};
}

enum class Format { csv, json };

Format output_format(const RawOptions& o) {
  if (o.format) {
    if (*o.format == "csv") {
      return Format::csv;
    }
    if (*o.format == "json") {
      return Format::json;
    }
    throw UsageError("--format must be csv or json");
  }
  if (o.out && o.out->size() >= 5 && o.out->substr(o.out->size() - 5) == ".json") {
    return Format::json;
  }
  return Format::csv;
}

void emit(const RawOptions& o, const std::string& contents, std::ostream& out) {
  if (o.out) {
    io::write_file(*o.out, contents);
  } else {
    out << contents;
  }
}

const std::string& fmt_bool(bool b) {
  static const std::string t = "true";
  static const std::string f = "false";
  return b ? t : f;
}

// Data for fit and density: points from --input, or a scenario sample.
struct Workload {
  std::vector<Point2> points;
  std::optional<LabeledSample> sample;
  std::optional<Scenario> scenario;
  NoiseModel noise;
  std::size_t k = 2;
};

Workload load_workload(const RawOptions& o) {
  Workload w;
  if (o.input) {
    try {
      w.points = io::read_points_csv(*o.input);
    } catch (const io::FormatError& e) {
      throw UsageError(e.what());
    }
    w.noise = o.noise ? parse_noise(*o.noise) : NoiseModel::none();
    w.k = o.k.value_or(2);
  } else {
    Family fam;
    try {
      fam = parse_family(o.family);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto us = parse_u_list(o.u);
    if (us.size() != 1) {
      throw UsageError("a single --u value is expected here");
    }
    w.scenario = Scenario{fam, us.front()};
    const std::size_t n = o.n.value_or(w.scenario->default_n());
    w.k = o.k.value_or(w.scenario->k());
    if (n < w.k) {
      throw UsageError("n must be at least k");
    }
    w.sample = sample_scenario(*w.scenario, n, o.seed);
    w.points = w.sample->z;
    w.noise = o.noise ? parse_noise(*o.noise) : w.scenario->noise();
  }
  if (w.k < 1) {
    throw UsageError("k must be at least 1");
  }
  if (w.k > w.points.size()) {
    throw UsageError("k exceeds the number of points");
  }
  return w;
}

Bandwidth resolve_bandwidth(const BandwidthChoice& choice, const Workload& w, const Codebook& init,
                            const NoisyFitConfig& fit, std::uint64_t seed) {
  switch (choice.mode) {
    case BandwidthMode::fixed:
      return *choice.value;
    case BandwidthMode::reference:
      return reference_bandwidth(w.points);
    case BandwidthMode::tuned: {
      if (!w.scenario) {
        throw UsageError("--bandwidth tuned needs a scenario (clean tuning sample)");
      }
      Rng rng(seed, 2);
      const auto tuning = sample_latent(*w.scenario, 1000, rng);
      return tune_bandwidth(w.points, w.noise, bandwidth_candidates(w.points), tuning, init, fit).best;
    }
  }
  return reference_bandwidth(w.points);
}

int cmd_density(const RawOptions& o, std::ostream& out) {
  const Format format = output_format(o);
  const GridCounts counts = parse_grid(o.grid);
  const BandwidthChoice choice = parse_bandwidth(o.bandwidth, BandwidthMode::reference);
  const Workload w = load_workload(o);
  NoisyFitConfig fit;
  fit.counts = counts;
  Rng init_rng(o.seed, 1);
  const Codebook init = random_init(w.points, w.k, init_rng);
  const Bandwidth bw = resolve_bandwidth(choice, w, init, fit, o.seed);
  const DensityEstimate d = estimate_density_fft(w.points, w.noise, bw, counts);
  emit(o, format == Format::json ? io::density_to_json(d) : io::density_to_csv(d), out);
  return kSuccess;
}

int cmd_fit(const RawOptions& o, std::ostream& out) {
  const Format format = output_format(o);
  const GridCounts counts = parse_grid(o.grid);
  if (o.algorithm != "noisy" && o.algorithm != "lloyd") {
    throw UsageError("--algorithm must be noisy or lloyd");
  }
  const BandwidthChoice choice = parse_bandwidth(o.bandwidth, BandwidthMode::reference);
  const Workload w = load_workload(o);
  NoisyFitConfig fit;
  fit.counts = counts;
  Rng init_rng(o.seed, 1);
  const Codebook init = random_init(w.points, w.k, init_rng);

  FitResult result;
  std::optional<Bandwidth> bw;
  if (o.algorithm == "noisy") {
    bw = resolve_bandwidth(choice, w, init, fit, o.seed);
    result = noisy_kmeans_fit(w.points, w.noise, *bw, init, fit);
  } else {
    try {
      result = lloyd_kmeans_fit(w.points, init, fit.fit);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  std::optional<double> risk;
  if (w.sample && result.codebook.k() == w.scenario->k()) {
    risk = clustering_risk(result.codebook, *w.sample);
  }

  std::string text;
  if (format == Format::json) {
    nlohmann::ordered_json j;
    j["algorithm"] = o.algorithm;
    if (bw) {
      j["bandwidth"] = {bw->first(), bw->second()};
    }
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["reseed_events"] = result.reseed_events;
    nlohmann::ordered_json centers = nlohmann::ordered_json::array();
    for (const Point2& c : result.codebook.centers) {
      centers.push_back({c.x, c.y});
    }
    j["centers"] = centers;
    j["distortion_trace"] = result.distortion_trace;
    j["assignments"] = result.assignments;
    if (risk) {
      j["risk"] = *risk;
    }
    text = j.dump() + "\n";
  } else {
    text = "# algorithm=" + o.algorithm + " iterations=" + std::to_string(result.iterations) +
           " converged=" + fmt_bool(result.converged) +
           " reseed_events=" + std::to_string(result.reseed_events);
    if (bw) {
      text += " bandwidth=" + io::format_double(bw->first()) + "," + io::format_double(bw->second());
    }
    if (risk) {
      text += " risk=" + io::format_double(*risk);
    }
    text += "\ncenter,x,y\n";
    for (std::size_t j = 0; j < result.codebook.k(); ++j) {
      const Point2& c = result.codebook.centers[j];
      text += std::to_string(j) + "," + io::format_double(c.x) + "," + io::format_double(c.y) + "\n";
    }
    text += "\niteration,distortion\n";
    for (std::size_t i = 0; i < result.distortion_trace.size(); ++i) {
      text += std::to_string(i + 1) + "," + io::format_double(result.distortion_trace[i]) + "\n";
    }
    text += "\npoint,x,y,cluster\n";
    for (std::size_t i = 0; i < w.points.size(); ++i) {
      text += std::to_string(i) + "," + io::format_double(w.points[i].x) + "," +
              io::format_double(w.points[i].y) + "," + std::to_string(result.assignments[i]) + "\n";
    }
  }
  emit(o, text, out);
  return kSuccess;
}

int cmd_experiment(const RawOptions& o, std::ostream& out) {
  const Format format = output_format(o);
  const GridCounts counts = parse_grid(o.grid);
  Family fam;
  try {
    fam = parse_family(o.family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto us = parse_u_list(o.u);
  if (o.R < 1) {
    throw UsageError("R must be at least 1");
  }
  if (o.threads < 1) {
    throw UsageError("threads must be at least 1");
  }
  if (o.noise) {
    throw UsageError("--noise is fixed by the scenario in experiment mode");
  }
  const BandwidthChoice choice = parse_bandwidth(o.bandwidth, BandwidthMode::tuned);
  if (choice.mode == BandwidthMode::reference) {
    throw UsageError("experiment accepts --bandwidth F,F or tuned");
  }
  if (o.k && *o.k != Scenario{fam, 1}.k()) {
    throw UsageError("k is fixed by the scenario family");
  }

  std::vector<ReplicationSummary> summaries;
  for (int u : us) {
    ReplicationConfig cfg;
    cfg.scenario = {fam, u};
    cfg.n = o.n.value_or(cfg.scenario.default_n());
    if (cfg.n < cfg.scenario.k()) {
      throw UsageError("n must be at least k");
    }
    cfg.R = o.R;
    cfg.seed = o.seed;
    cfg.bandwidth = choice.value;
    cfg.fit.counts = counts;
    cfg.threads = o.threads;
    summaries.push_back(run_replications(cfg));
  }

  std::string text;
  if (format == Format::json) {
    nlohmann::ordered_json j;
    j["risks"] = nlohmann::ordered_json::array();
    j["summary"] = nlohmann::ordered_json::array();
    for (const auto& s : summaries) {
      for (const auto& run : s.runs) {
        for (const auto& [name, risk] : {std::pair{"lloyd", run.lloyd_risk}, std::pair{"noisy", run.noisy_risk}}) {
          nlohmann::ordered_json row;
          row["replication"] = run.replication;
          row["algorithm"] = name;
          row["u"] = s.config.scenario.u;
          row["risk"] = risk;
          row["failed"] = risk > 0.2;
          row["bandwidth"] = {run.bandwidth.first(), run.bandwidth.second()};
          j["risks"].push_back(row);
        }
      }
    }
    for (const auto& s : summaries) {
      for (const auto& [name, r] : {std::pair{"lloyd", s.lloyd}, std::pair{"noisy", s.noisy}}) {
        nlohmann::ordered_json row;
        row["u"] = s.config.scenario.u;
        row["algorithm"] = name;
        row["mean"] = r.mean;
        row["sd"] = r.sd;
        row["ci_lo"] = r.ci_lo();
        row["ci_hi"] = r.ci_hi();
        row["failures"] = r.failures;
        j["summary"].push_back(row);
      }
    }
    text = j.dump() + "\n";
  } else {
    text = "replication,algorithm,u,risk,failed\n";
    for (const auto& s : summaries) {
      const std::string u = std::to_string(s.config.scenario.u);
      for (const auto& run : s.runs) {
        const std::string r = std::to_string(run.replication);
        text += r + ",lloyd," + u + "," + io::format_double(run.lloyd_risk) + "," +
                (run.lloyd_risk > 0.2 ? "1" : "0") + "\n";
        text += r + ",noisy," + u + "," + io::format_double(run.noisy_risk) + "," +
                (run.noisy_risk > 0.2 ? "1" : "0") + "\n";
      }
    }
    text += "\nu,algorithm,mean,sd,ci_lo,ci_hi,failures\n";
    for (const auto& s : summaries) {
      const std::string u = std::to_string(s.config.scenario.u);
      for (const auto& [name, r] : {std::pair{"lloyd", s.lloyd}, std::pair{"noisy", s.noisy}}) {
        text += u + "," + name + "," + io::format_double(r.mean) + "," + io::format_double(r.sd) + "," +
                io::format_double(r.ci_lo()) + "," + io::format_double(r.ci_hi()) + "," +
                std::to_string(r.failures) + "\n";
      }
    }
  }
  emit(o, text, out);
  return kSuccess;
}

void add_common(CLI::App* sub, RawOptions& o) {
  sub->add_option("--family", o.family, "Scenario family: mod1 or mod2");
  sub->add_option("--u", o.u, "Scenario parameter in 1..10 (experiment accepts a comma list)");
  sub->add_option("--n", o.n, "Sample size (default 100 for mod1, 180 for mod2)");
  sub->add_option("--k", o.k, "Number of clusters");
  sub->add_option("--grid", o.grid, "Grid nodes per axis: INT or INT,INT (powers of two)");
  sub->add_option("--bandwidth", o.bandwidth, "F,F | tuned | reference");
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--threads", o.threads, "Worker threads for replications");
  sub->add_option("--out", o.out, "Output path (stdout when omitted)");
  sub->add_option("--format", o.format, "csv or json (default from --out extension, else csv)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noisy k-means: clustering with errors in variables", "noisy_kmeans"};
  app.require_subcommand(1);
  RawOptions o;

  auto* fit = app.add_subcommand("fit", "Cluster one dataset and write centers, labels and trace");
  add_common(fit, o);
  fit->add_option("--input", o.input, "Header-less x,y CSV of observed points");
  fit->add_option("--noise", o.noise, "none | gaussian:F,F | laplace:F,F");
  fit->add_option("--algorithm", o.algorithm, "noisy or lloyd");

  auto* density = app.add_subcommand("density", "Write the deconvolution density estimate grid");
  add_common(density, o);
  density->add_option("--input", o.input, "Header-less x,y CSV of observed points");
  density->add_option("--noise", o.noise, "none | gaussian:F,F | laplace:F,F");

  auto* experiment = app.add_subcommand("experiment", "Replicated Lloyd vs noisy k-means comparison");
  add_common(experiment, o);
  experiment->add_option("--R", o.R, "Number of replications");
  experiment->add_option("--noise", o.noise, "Not accepted: the scenario fixes the noise");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (fit->parsed()) {
      return cmd_fit(o, out);
    }
    if (density->parsed()) {
      return cmd_density(o, out);
    }
    return cmd_experiment(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace nkm::cli
