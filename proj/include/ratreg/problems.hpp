#pragma once

#include "ratreg/linop.hpp"

#include <cstdint>
#include <memory>
#include <optional>

namespace ratreg {

struct NoiseSpec {
  double delta = 0.0;      // noise level ||y_noisy - y_exact||, > 0 to add noise
  std::uint64_t seed = 0;  // stream for the noise direction
};

/// A fully specified test instance: forward map, exact solution, exact and
/// noisy data, and (when generated from a source condition) the exponent mu
/// and source element w with x_true = (A*A)^mu w.
struct InverseProblem {
  std::shared_ptr<const LinearOperator> op;
  Vector x_true;
  Vector y_exact;
  Vector y_noisy;
  double delta = 0.0;
  std::optional<double> mu;
  Vector w;  // empty when no source condition was prescribed
  std::uint64_t seed = 0;
};

/// Seed-deterministic gaussian direction projected onto the closure of
/// range(A) and scaled so that ||result - y|| equals delta exactly.
Vector addNoise(const Vector& y, const NoiseSpec& noise, const LinearOperator& op);

/// Diagonal problem with sigma_i = i^{-s}, source element w drawn uniformly
/// on the unit sphere from the seed (substream 1), x_true = (A*A)^mu w.
/// Passing w_override fixes the source element instead of drawing it.
InverseProblem makeDiagonalProblem(int m, double decay_s, double mu, const NoiseSpec& noise,
                                   const std::optional<Vector>& w_override = std::nullopt);

/// Midpoint-rule discretization on [0,1]^2 of the gravity surveying kernel
/// K(s,t) = d (d^2 + (s-t)^2)^{-3/2} with x_true(t) = sin(pi t) + 0.5 sin(2 pi t).
InverseProblem makeGravityProblem(int m, double depth_d, const NoiseSpec& noise);

SpectralProblem spectralForm(const InverseProblem& problem);

}  // namespace ratreg
