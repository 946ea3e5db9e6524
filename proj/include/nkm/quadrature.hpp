#pragma once

#include <cstddef>
#include <vector>

namespace nkm {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t order);

}  // namespace nkm
