#pragma once

#include "ratreg/linop.hpp"

#include <cstdint>

namespace ratreg {

/// Counter-based deterministic random stream (SplitMix64 core).
///
/// Draw k of stream s is mix64(mix64(s) + (k+1) * 0x9E3779B97F4A7B15); the
/// value depends only on (s, k), so any draw can be produced independently of
/// the others. Uniforms take the top 53 bits, standard normals come from
/// Box-Muller on the consecutive pair (2k, 2k+1). Substreams decorrelate
/// different uses of one user-facing seed.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : base_(mix64(seed)) {}

  static std::uint64_t mix64(std::uint64_t z);

  /// Independent stream derived from (seed, tag).
  CounterRng substream(std::uint64_t tag) const;

  /// Uniform draw k in (0, 1].
  double uniform(std::uint64_t k) const;
  /// Standard normal draw k.
  double normal(std::uint64_t k) const;
  /// Vector of n independent standard normals (draws 0..n-1).
  Vector gaussianVector(Eigen::Index n) const;

private:
  std::uint64_t base_;
};

}  // namespace ratreg
