#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nkm/cli.hpp"
#include "nkm/io.hpp"

namespace fs = std::filesystem;
using namespace nkm;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("nkm_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

double max_value(const std::string& csv) {
  double best = -INFINITY;
  for (const auto& l : lines(csv)) {
    if (l.empty() || l[0] == '#' || l[0] == 'x') continue;
    best = std::max(best, std::stod(l.substr(l.rfind(',') + 1)));
  }
  return best;
}

}  // namespace

TEST_CASE("experiment output shape and determinism") {
  const std::vector<std::string> args{"experiment", "--family", "mod1", "--u", "3", "--R", "20",
                                      "--n", "60", "--bandwidth", "0.5,1.0", "--grid", "32", "--seed", "5"};
  const Run a = run(args);
  REQUIRE(a.code == 0);
  const auto l = lines(a.out);
  // Header, 2 rows per replication, blank separator, summary header and 2 summary rows.
  REQUIRE(l.size() == 1 + 40 + 1 + 1 + 2);
  CHECK(l[0] == "replication,algorithm,u,risk,failed");
  CHECK(l[41].empty());
  CHECK(l[42] == "u,algorithm,mean,sd,ci_lo,ci_hi,failures");
  CHECK(l[43].rfind("3,lloyd,", 0) == 0);
  CHECK(l[44].rfind("3,noisy,", 0) == 0);
  CHECK(run(args).out == a.out);
}

TEST_CASE("experiment over several u values writes json") {
  const fs::path out = scratch_dir() / "exp.json";
  const Run r = run({"experiment", "--family", "mod2", "--u", "2,8", "--R", "2", "--n", "60", "--bandwidth",
                     "1.5,1.5", "--grid", "32", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["risks"].size() == 2 * 2 * 2);
  CHECK(j["summary"].size() == 4);
}

TEST_CASE("usage errors") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"experiment", "--u", "11"},
           {"experiment", "--u", "0"},
           {"experiment", "--family", "mod3"},
           {"experiment", "--noise", "gaussian:1,1"},
           {"experiment", "--R", "0"},
           {"density", "--grid", "100"},
           {"density", "--bandwidth", "-1,2"},
           {"density", "--noise", "cauchy:1,1"},
           {"fit", "--algorithm", "em"},
           {"fit", "--bandwidth", "tuned", "--input", "/nonexistent.csv"},
           {"bogus"},
           {}}) {
    const Run r = run(args);
    CHECK(r.code == cli::kUsageError);
    CHECK(r.err.rfind("error: ", 0) == 0);
  }
  CHECK(run({"experiment", "--u", "11"}).err == "error: u must be in 1..10\n");
}

TEST_CASE("density grid and deconvolution") {
  const fs::path dir = scratch_dir();
  const std::vector<std::string> base{"density", "--family", "mod1", "--u", "6", "--n", "150",
                                      "--bandwidth", "0.5,0.8", "--seed", "3"};
  const Run plain = run(base);
  REQUIRE(plain.code == 0);
  const auto l = lines(plain.out);
  REQUIRE(l.size() == 2 + 128 * 128);
  CHECK(l[0].rfind("# origin=", 0) == 0);
  CHECK(l[1] == "x,y,value");

  auto smoothed_args = base;
  smoothed_args.insert(smoothed_args.end(), {"--noise", "none"});
  const Run smoothed = run(smoothed_args);
  REQUIRE(smoothed.code == 0);
  CHECK(max_value(plain.out) >= max_value(smoothed.out));

  SUBCASE("json round trip") {
    auto args = base;
    args.insert(args.end(), {"--out", (dir / "d.json").string(), "--grid", "32,64"});
    REQUIRE(run(args).code == 0);
    const std::string text = slurp(dir / "d.json");
    const DensityEstimate d = io::density_from_json(text);
    CHECK(d.grid.counts().m1 == 32);
    CHECK(d.grid.counts().m2 == 64);
    CHECK(io::density_to_json(d) == text);
  }
  SUBCASE("input file") {
    {
      std::ofstream f(dir / "pts.csv");
      f << "0,0\n1,0.5\n\n-1,2\n3,3\n";
    }
    const Run r = run({"density", "--input", (dir / "pts.csv").string(), "--grid", "16", "--noise", "laplace:0.2,0.2"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out).size() == 2 + 256);
  }
  SUBCASE("malformed input") {
    {
      std::ofstream f(dir / "bad.csv");
      f << "0,0\n1,abc\n";
    }
    const Run r = run({"density", "--input", (dir / "bad.csv").string()});
    CHECK(r.code == cli::kUsageError);
    {
      std::ofstream f(dir / "empty.csv");
    }
    CHECK(run({"density", "--input", (dir / "empty.csv").string()}).code == cli::kUsageError);
  }
}

TEST_CASE("fit") {
  const std::vector<std::string> base{"fit", "--family", "mod2", "--u", "4", "--bandwidth", "1.2,1.2",
                                      "--grid", "64", "--seed", "9", "--format", "json"};
  const Run a = run(base);
  REQUIRE(a.code == 0);
  CHECK(run(base).out == a.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["algorithm"] == "noisy");
  CHECK(j["centers"].size() == 3);
  CHECK(j["assignments"].size() == 180);
  const auto trace = j["distortion_trace"].get<std::vector<double>>();
  REQUIRE(!trace.empty());
  CHECK(trace.size() == j["iterations"].get<std::size_t>());
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
  CHECK(j["risk"].get<double>() >= 0.0);

  SUBCASE("k = 1") {
    auto args = base;
    args.insert(args.end(), {"--k", "1"});
    const auto one = nlohmann::json::parse(run(args).out);
    CHECK(one["centers"].size() == 1);
    for (const auto& l : one["assignments"]) CHECK(l == 0);
  }
  SUBCASE("lloyd and csv") {
    const Run r = run({"fit", "--family", "mod1", "--u", "2", "--algorithm", "lloyd"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# algorithm=lloyd", 0) == 0);
  }
}

TEST_CASE("binary exit codes") {
  const std::string exe = NKM_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("--help") == 0);
  CHECK(status("experiment --u 11") == 2);
  CHECK(status("fit --family mod1 --u 1 --n 40 --grid 16") == 0);
}
