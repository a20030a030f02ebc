#include "ratreg/ratkrylov.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ratreg {

namespace {

constexpr double kGramTruncationTol = 1e-13;  // relative eigenvalue cutoff
constexpr double kQrTruncationTol = 1e-10;    // relative pivot cutoff

Matrix imageMatrix(const RationalBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.images.size());
  if (n == 0) throw std::invalid_argument("empty basis");
  Matrix b(basis.images.front().size(), n);
  for (Eigen::Index j = 0; j < n; ++j) b.col(j) = basis.images[static_cast<std::size_t>(j)];
  return b;
}

AggregationResult solveOverBasis(const RationalBasis& basis, const Vector& y, SolvePath path) {
  Matrix b = imageMatrix(basis);
  const auto n = b.cols();

  // Columns of very different magnitude (high Krylov powers vs Tikhonov
  // solutions) would distort the rank thresholds; the least squares runs on
  // unit columns and the coefficients are rescaled afterwards.
  Vector scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm = b.col(j).norm();
    scale[j] = norm > 0.0 ? norm : 1.0;
    b.col(j) /= scale[j];
  }

  AggregationResult result;
  result.path = path;
  Vector c(n);

  if (path == SolvePath::Gram) {
    const Matrix gram = b.transpose() * b;
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = b.col(i).dot(y);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    if (eig.info() != Eigen::Success) throw std::runtime_error("Gram eigendecomposition failed");
    const Vector& ev = eig.eigenvalues();
    const double cutoff = kGramTruncationTol * std::max(ev.maxCoeff(), 0.0);
    int rank = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (ev[j] > cutoff && ev[j] > 0.0) ++rank;
    const auto pinv_apply = [&](const Vector& rhs) {
      Vector out = Vector::Zero(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (ev[j] > cutoff && ev[j] > 0.0)
          out += (eig.eigenvectors().col(j).dot(rhs) / ev[j]) * eig.eigenvectors().col(j);
      }
      return out;
    };
    c = pinv_apply(z);
    // Iterative refinement recovers the accuracy the squared condition
    // number of G takes away from the plain normal-equations solve.
    for (int sweep = 0; sweep < 2; ++sweep) {
      const Vector residual = y - b * c;
      c += pinv_apply(b.transpose() * residual);
    }
    result.effective_rank = rank;
  } else {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(b.rows(), b.cols());
    cod.setThreshold(kQrTruncationTol);
    cod.compute(b);
    c = cod.solve(y);
    result.effective_rank = static_cast<int>(cod.rank());
  }

  c.array() /= scale.array();
  result.coefficients = c;
  result.breakdown = result.effective_rank < static_cast<int>(n);
  result.x = Vector::Zero(basis.vectors.front().size());
  Vector fitted = Vector::Zero(b.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    result.x += c[i] * basis.vectors[static_cast<std::size_t>(i)];
    fitted += (c[i] * scale[i]) * b.col(i);
  }
  result.residual_norm = (y - fitted).norm();
  return result;
}

AggregationResult factorizedSolve(const LinearOperator& op, const Vector& y_noisy,
                                  const AlphaSchedule& schedule, int tikhonov_steps,
                                  int cgne_steps, bool reorthogonalize) {
  AggregationResult result;
  result.path = SolvePath::Factorized;

  Vector x_it = Vector::Zero(op.cols());
  Vector y_hat = y_noisy;
  if (tikhonov_steps > 0) {
    IteratedTikhonovResult it = iteratedTikhonov(op, y_noisy, schedule, tikhonov_steps);
    x_it = it.iterates.back();
    y_hat = it.residuals.back();
  }

  CgneOptions opts;
  opts.max_iter = cgne_steps;
  opts.reorthogonalize = reorthogonalize;
  CgneOutcome cg = cgne(op, y_hat, opts);

  result.x = x_it + cg.x;
  result.residual_norm = cg.trace.residual_norms.back();
  result.breakdown = cg.broke_down;
  const int completed = static_cast<int>(cg.trace.residual_norms.size()) - 1;
  result.effective_rank = completed;
  return result;
}

}  // namespace

RationalBasis buildAggregationBasis(const LinearOperator& op, const Vector& y_noisy,
                                    const AlphaSchedule& schedule, int n) {
  if (n < 1 || n > schedule.size())
    throw std::out_of_range("basis size exceeds schedule length");
  RationalBasis basis;
  basis.vectors.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    basis.vectors.push_back(tikhonov(op, y_noisy, schedule.alpha(i)));
    basis.kinds.push_back(BasisKind::TikhonovSolution);
    basis.kind_index.push_back(i);
    basis.images.push_back(op.apply(basis.vectors.back()));
  }
  return basis;
}

RationalBasis buildRatCgBasis(const LinearOperator& op, const Vector& y_noisy,
                              const AlphaSchedule& schedule, int n) {
  if (n < 1) throw std::out_of_range("basis needs at least one vector");
  if (n / 2 > schedule.size()) throw std::out_of_range("basis size exceeds schedule length");
  RationalBasis basis;
  const Vector ytilde = op.applyAdjoint(y_noisy);
  Vector krylov = ytilde;
  int alpha_count = 0;
  int power = 0;
  for (int i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      if (power > 0) krylov = op.applyAdjoint(op.apply(krylov));
      basis.vectors.push_back(krylov);
      basis.kinds.push_back(BasisKind::KrylovPower);
      basis.kind_index.push_back(power);
      ++power;
    } else {
      ++alpha_count;
      basis.vectors.push_back(tikhonov(op, y_noisy, schedule.alpha(alpha_count)));
      basis.kinds.push_back(BasisKind::TikhonovSolution);
      basis.kind_index.push_back(alpha_count);
    }
    basis.images.push_back(op.apply(basis.vectors.back()));
  }
  return basis;
}

std::string toString(SolvePath path) {
  switch (path) {
    case SolvePath::Gram: return "gram";
    case SolvePath::Qr: return "qr";
    case SolvePath::Factorized: return "factorized";
  }
  return "unknown";
}

SolvePath solvePathFromString(const std::string& name) {
  if (name == "gram") return SolvePath::Gram;
  if (name == "qr") return SolvePath::Qr;
  if (name == "factorized") return SolvePath::Factorized;
  throw std::invalid_argument("unknown solve path: " + name);
}

AggregationResult aggregate(const LinearOperator& op, const Vector& y_noisy,
                            const AlphaSchedule& schedule, int n, SolvePath path) {
  if (path == SolvePath::Factorized) return factorizedAggregate(op, y_noisy, schedule, n);
  if (y_noisy.norm() == 0.0) {
    AggregationResult zero;
    zero.path = path;
    zero.x = Vector::Zero(op.cols());
    zero.coefficients = Vector::Zero(n);
    zero.residual_norm = 0.0;
    zero.effective_rank = 0;
    zero.breakdown = true;
    return zero;
  }
  return solveOverBasis(buildAggregationBasis(op, y_noisy, schedule, n), y_noisy, path);
}

AggregationResult ratcg(const LinearOperator& op, const Vector& y_noisy,
                        const AlphaSchedule& schedule, int n, SolvePath path) {
  if (path == SolvePath::Factorized) return factorizedRatCg(op, y_noisy, schedule, n);
  if (y_noisy.norm() == 0.0) {
    AggregationResult zero;
    zero.path = path;
    zero.x = Vector::Zero(op.cols());
    zero.coefficients = Vector::Zero(n);
    zero.residual_norm = 0.0;
    zero.effective_rank = 0;
    zero.breakdown = true;
    return zero;
  }
  return solveOverBasis(buildRatCgBasis(op, y_noisy, schedule, n), y_noisy, path);
}

AggregationResult factorizedAggregate(const LinearOperator& op, const Vector& y_noisy,
                                      const AlphaSchedule& schedule, int n,
                                      bool reorthogonalize) {
  if (n < 1 || n > schedule.size()) throw std::out_of_range("n exceeds schedule length");
  return factorizedSolve(op, y_noisy, schedule, n, n, reorthogonalize);
}

AggregationResult factorizedRatCg(const LinearOperator& op, const Vector& y_noisy,
                                  const AlphaSchedule& schedule, int n, bool reorthogonalize) {
  if (n < 1 || n / 2 > schedule.size()) throw std::out_of_range("n exceeds schedule length");
  return factorizedSolve(op, y_noisy, schedule, n / 2, n, reorthogonalize);
}

int detectBreakdown(const RationalBasis& basis, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(tol);
  cod.compute(imageMatrix(basis));
  return static_cast<int>(cod.rank());
}

}  // namespace ratreg
