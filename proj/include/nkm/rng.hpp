#pragma once

#include <cstdint>
#include <random>

namespace nkm {

// Seedable generator whose output is fixed by the C++ standard on every
// platform: std::mt19937_64 seeded through std::seed_seq, 53-bit uniforms,
// Box-Muller normals and rejection-sampled integers. The standard library's
// distributions are implementation-defined and are not used.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  // Standard normal.
  double normal();
  // Uniform on {0, ..., n - 1}; n > 0.
  std::uint64_t below(std::uint64_t n);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nkm
