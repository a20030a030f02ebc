#pragma once

#include <Eigen/Dense>

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ratreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when vector lengths do not match operator dimensions (caller bug).
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Bounded linear map A : R^p -> R^m with adjoint, norm and a shifted
/// normal-equation solve. Instances are immutable after construction and can
/// be shared freely between threads.
class LinearOperator {
public:
  virtual ~LinearOperator() = default;

  virtual Eigen::Index rows() const = 0;  // range dimension m
  virtual Eigen::Index cols() const = 0;  // domain dimension p

  /// A x.
  virtual Vector apply(const Vector& x) const = 0;
  /// A* y.
  virtual Vector applyAdjoint(const Vector& y) const = 0;
  /// ||A|| (largest singular value).
  virtual double operatorNorm() const = 0;
  /// (A*A + alpha I)^{-1} rhs for alpha > 0; rhs lives in the domain space.
  virtual Vector solveShiftedNormal(const Vector& rhs, double alpha) const = 0;

protected:
  void checkDomain(const Vector& x) const {
    if (x.size() != cols())
      throw DimensionError("vector length " + std::to_string(x.size()) +
                           " does not match domain dimension " + std::to_string(cols()));
  }
  void checkRange(const Vector& y) const {
    if (y.size() != rows())
      throw DimensionError("vector length " + std::to_string(y.size()) +
                           " does not match range dimension " + std::to_string(rows()));
  }
};

/// Operator in canonical singular coordinates: A = diag(sigma) with
/// sigma_1 >= sigma_2 >= ... >= sigma_m > 0. Self-adjoint by construction;
/// the eigenvalues of A*A are sigma_i^2.
class DiagonalOperator final : public LinearOperator {
public:
  explicit DiagonalOperator(Vector singular_values);

  Eigen::Index rows() const override { return sigma_.size(); }
  Eigen::Index cols() const override { return sigma_.size(); }
  Vector apply(const Vector& x) const override;
  Vector applyAdjoint(const Vector& y) const override;
  double operatorNorm() const override { return sigma_.size() > 0 ? sigma_[0] : 0.0; }
  Vector solveShiftedNormal(const Vector& rhs, double alpha) const override;

  const Vector& singularValues() const { return sigma_; }

private:
  Vector sigma_;
};

/// Dense m x p matrix operator.
class DenseOperator final : public LinearOperator {
public:
  explicit DenseOperator(Matrix entries);

  Eigen::Index rows() const override { return a_.rows(); }
  Eigen::Index cols() const override { return a_.cols(); }
  Vector apply(const Vector& x) const override;
  Vector applyAdjoint(const Vector& y) const override;
  double operatorNorm() const override { return norm_; }
  Vector solveShiftedNormal(const Vector& rhs, double alpha) const override;

  const Matrix& entries() const { return a_; }

private:
  const Matrix& normalMatrix() const;  // A^T A, built on first use

  Matrix a_;
  double norm_;
  mutable Matrix normal_;
  mutable std::once_flag normal_once_;
};

/// Thin SVD A = U diag(sigma) V^T with sigma non-increasing and orthonormal
/// column sets U, V.
struct SvdDecomposition {
  Vector singular_values;
  Matrix left_vectors;   // U, m x r
  Matrix right_vectors;  // V, p x r
};

SvdDecomposition svd(const DenseOperator& op);

/// Embeds a diagonal operator as an explicit dense matrix (test helper and
/// the bridge used by the dense/diagonal agreement checks).
DenseOperator toDense(const DiagonalOperator& op);

/// Operator plus data expressed in the singular coordinates of A:
/// lambda_i = sigma_i^2 and y_i = <y, u_i>. Retains one entry per singular
/// triplet (duplicates allowed); the residual measures merge equal nodes.
struct SpectralProblem {
  Vector lambda;    // eigenvalues of A*A, paired with y_coeff
  Vector y_coeff;   // spectral coefficients of the data
  double op_norm;   // ||A||
};

SpectralProblem spectralForm(const DiagonalOperator& op, const Vector& y);
SpectralProblem spectralForm(const DenseOperator& op, const Vector& y);
SpectralProblem spectralForm(const LinearOperator& op, const Vector& y);

/// Canonical diagonal realization of a spectral problem: the positive part of
/// the spectrum sorted non-increasing with the data coefficients carried
/// along. out_of_range_mass is the norm of the data component on the
/// zero-eigenvalue part; solver residual norms on the reduced pair satisfy
/// rho_full^2 = rho_reduced^2 + out_of_range_mass^2.
struct CanonicalProblem {
  std::shared_ptr<const DiagonalOperator> op;
  Vector y;
  double out_of_range_mass = 0.0;
};

CanonicalProblem canonicalProblem(const SpectralProblem& sp);

}  // namespace ratreg
