#include "nkm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <locale>
#include <sstream>

#include <json.hpp>

namespace nkm::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_number(const std::string& token, std::size_t line) {
  std::istringstream is(token);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (is.fail() || !(is >> std::ws).eof() || !std::isfinite(v)) {
    throw FormatError("line " + std::to_string(line) + ": not a finite number: '" + token + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Point2> parse_points_csv(std::istream& in) {
  std::vector<Point2> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) {
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw FormatError("line " + std::to_string(lineno) + ": expected 'x,y'");
    }
    pts.push_back({parse_number(trim(t.substr(0, comma)), lineno),
                   parse_number(trim(t.substr(comma + 1)), lineno)});
  }
  if (pts.empty()) {
    throw FormatError("no points in input");
  }
  return pts;
}

std::vector<Point2> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path);
  }
  return parse_points_csv(in);
}

std::string density_to_csv(const DensityEstimate& density) {
  const Grid2D& g = density.grid;
  std::string out;
  out += "# origin=" + format_double(g.origin().x) + "," + format_double(g.origin().y);
  out += " spacing=" + format_double(g.spacing()[0]) + "," + format_double(g.spacing()[1]);
  out += " counts=" + std::to_string(g.counts().m1) + "," + std::to_string(g.counts().m2);
  out += " raw_min=" + format_double(density.raw_min);
  out += std::string(" clipped=") + (density.clipped ? "1" : "0") + "\n";
  out += "x,y,value\n";
  for (std::size_t i = 0; i < g.counts().m1; ++i) {
    for (std::size_t j = 0; j < g.counts().m2; ++j) {
      out += format_double(g.node_x(i)) + "," + format_double(g.node_y(j)) + "," +
             format_double(g.at(i, j)) + "\n";
    }
  }
  return out;
}

std::string density_to_json(const DensityEstimate& density) {
  const Grid2D& g = density.grid;
  nlohmann::ordered_json j;
  j["origin"] = {g.origin().x, g.origin().y};
  j["spacing"] = {g.spacing()[0], g.spacing()[1]};
  j["counts"] = {g.counts().m1, g.counts().m2};
  j["raw_min"] = density.raw_min;
  j["clipped"] = density.clipped;
  j["values"] = std::vector<double>(g.values().begin(), g.values().end());
  return j.dump() + "\n";
}

DensityEstimate density_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const Point2 origin{j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
    const std::array<double, 2> spacing{j.at("spacing").at(0).get<double>(),
                                        j.at("spacing").at(1).get<double>()};
    const GridCounts counts{j.at("counts").at(0).get<std::size_t>(),
                            j.at("counts").at(1).get<std::size_t>()};
    auto values = j.at("values").get<std::vector<double>>();
    return DensityEstimate{Grid2D(origin, spacing, counts, std::move(values)),
                           j.at("raw_min").get<double>(), j.at("clipped").get<bool>(), 0.0, {}};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed density JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed density JSON: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << contents;
  if (!out) {
    throw std::runtime_error("failed writing " + path);
  }
}

}  // namespace nkm::io
