#include "ratreg/problems.hpp"

#include "ratreg/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ratreg {

namespace {

constexpr std::uint64_t kSourceTag = 1;
constexpr std::uint64_t kNoiseTag = 2;
constexpr double kPi = 3.14159265358979323846264338328;

Vector projectOntoRange(const Vector& v, const LinearOperator& op) {
  if (dynamic_cast<const DiagonalOperator*>(&op) != nullptr) return v;  // full range
  const auto* dense = dynamic_cast<const DenseOperator*>(&op);
  if (dense == nullptr) throw std::invalid_argument("unsupported operator type for projection");
  SvdDecomposition dec = svd(*dense);
  const double cutoff = 1e-12 * (dec.singular_values.size() > 0 ? dec.singular_values[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < dec.singular_values.size() && dec.singular_values[rank] > cutoff) ++rank;
  const auto ur = dec.left_vectors.leftCols(rank);
  return ur * (ur.transpose() * v);
}

}  // namespace

Vector addNoise(const Vector& y, const NoiseSpec& noise, const LinearOperator& op) {
  if (!(noise.delta > 0.0)) throw std::invalid_argument("noise level must be positive");
  CounterRng rng = CounterRng(noise.seed).substream(kNoiseTag);
  Vector direction = projectOntoRange(rng.gaussianVector(y.size()), op);
  const double norm = direction.norm();
  if (norm == 0.0) throw std::runtime_error("noise direction vanished under range projection");
  return y + (noise.delta / norm) * direction;
}

InverseProblem makeDiagonalProblem(int m, double decay_s, double mu, const NoiseSpec& noise,
                                   const std::optional<Vector>& w_override) {
  if (m < 2) throw std::invalid_argument("diagonal problem needs m >= 2");
  if (!(decay_s > 0.0)) throw std::invalid_argument("decay exponent s must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("source exponent mu must be positive");

  Vector sigma(m);
  for (int i = 0; i < m; ++i) sigma[i] = std::pow(static_cast<double>(i + 1), -decay_s);
  auto op = std::make_shared<DiagonalOperator>(sigma);

  Vector w;
  if (w_override) {
    w = *w_override;
    if (w.size() != m) throw std::invalid_argument("source element has wrong length");
  } else {
    w = CounterRng(noise.seed).substream(kSourceTag).gaussianVector(m);
  }
  const double wn = w.norm();
  if (wn == 0.0) throw std::invalid_argument("source element must be nonzero");
  w /= wn;

  InverseProblem p;
  p.op = op;
  p.w = w;
  p.mu = mu;
  p.seed = noise.seed;
  p.x_true = sigma.array().pow(2.0 * mu) * w.array();
  p.y_exact = op->apply(p.x_true);
  p.delta = noise.delta > 0.0 ? noise.delta : 0.0;
  p.y_noisy = p.delta > 0.0 ? addNoise(p.y_exact, noise, *op) : p.y_exact;
  return p;
}

InverseProblem makeGravityProblem(int m, double depth_d, const NoiseSpec& noise) {
  if (m < 8) throw std::invalid_argument("gravity problem needs m >= 8");
  if (!(depth_d > 0.0)) throw std::invalid_argument("depth must be positive");

  Matrix a(m, m);
  const double h = 1.0 / m;
  for (int i = 0; i < m; ++i) {
    const double s = (i + 0.5) * h;
    for (int j = 0; j < m; ++j) {
      const double t = (j + 0.5) * h;
      const double ds = s - t;
      a(i, j) = h * depth_d / std::pow(depth_d * depth_d + ds * ds, 1.5);
    }
  }
  auto op = std::make_shared<DenseOperator>(std::move(a));

  InverseProblem p;
  p.op = op;
  p.seed = noise.seed;
  p.x_true.resize(m);
  for (int j = 0; j < m; ++j) {
    const double t = (j + 0.5) * h;
    p.x_true[j] = std::sin(kPi * t) + 0.5 * std::sin(2.0 * kPi * t);
  }
  p.y_exact = op->apply(p.x_true);
  p.delta = noise.delta > 0.0 ? noise.delta : 0.0;
  p.y_noisy = p.delta > 0.0 ? addNoise(p.y_exact, noise, *op) : p.y_exact;
  return p;
}

SpectralProblem spectralForm(const InverseProblem& problem) {
  return spectralForm(*problem.op, problem.y_noisy);
}

}  // namespace ratreg
