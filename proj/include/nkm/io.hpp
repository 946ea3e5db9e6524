#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkm/density.hpp"
#include "nkm/types.hpp"

namespace nkm::io {

class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_double(double v);

// Header-less "x,y" lines; blank lines are skipped.
std::vector<Point2> parse_points_csv(std::istream& in);
std::vector<Point2> read_points_csv(const std::string& path);

// "# origin=.. spacing=.. counts=.. raw_min=.. clipped=.." then "x,y,value"
// and one row per node in storage order.
std::string density_to_csv(const DensityEstimate& density);

// {"origin","spacing","counts","raw_min","clipped","values"} on one line.
std::string density_to_json(const DensityEstimate& density);
DensityEstimate density_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& contents);

}  // namespace nkm::io
