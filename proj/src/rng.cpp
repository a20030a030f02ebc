#include "ratreg/rng.hpp"

#include <cmath>

namespace ratreg {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7B15ull;
constexpr std::uint64_t kSubstreamSalt = 0xD1B54A32D192ED03ull;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::uint64_t CounterRng::mix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

CounterRng CounterRng::substream(std::uint64_t tag) const {
  return CounterRng(base_ ^ mix64(tag * kSubstreamSalt + 1));
}

double CounterRng::uniform(std::uint64_t k) const {
  const std::uint64_t h = mix64(base_ + (k + 1) * kGamma);
  // top 53 bits, mapped to (0, 1]
  return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t k) const {
  const double u1 = uniform(2 * k);
  const double u2 = uniform(2 * k + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Vector CounterRng::gaussianVector(Eigen::Index n) const {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(static_cast<std::uint64_t>(i));
  return v;
}

}  // namespace ratreg
