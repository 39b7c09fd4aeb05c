#pragma once

#include <cstdint>
#include <random>

namespace nkgeo {

/// Seeded generator with a portable uniform mapping (the distribution classes of the
/// standard library are not specified bit-for-bit, the 64-bit Mersenne twister is).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace nkgeo
