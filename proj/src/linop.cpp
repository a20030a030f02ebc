#include "ratreg/linop.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

namespace ratreg {

namespace {

void requireFinite(const Matrix& a) {
  if (!a.allFinite()) throw std::invalid_argument("operator entries must be finite");
}

}  // namespace

DiagonalOperator::DiagonalOperator(Vector singular_values) : sigma_(std::move(singular_values)) {
  if (sigma_.size() == 0) throw std::invalid_argument("diagonal operator needs at least one entry");
  for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
    if (!(sigma_[i] > 0.0)) throw std::invalid_argument("singular values must be positive");
    if (i > 0 && sigma_[i] > sigma_[i - 1])
      throw std::invalid_argument("singular values must be non-increasing");
  }
}

Vector DiagonalOperator::apply(const Vector& x) const {
  checkDomain(x);
  return sigma_.cwiseProduct(x);
}

Vector DiagonalOperator::applyAdjoint(const Vector& y) const {
  checkRange(y);
  return sigma_.cwiseProduct(y);
}

Vector DiagonalOperator::solveShiftedNormal(const Vector& rhs, double alpha) const {
  checkDomain(rhs);
  if (!(alpha > 0.0)) throw std::invalid_argument("shift alpha must be positive");
  return rhs.array() / (sigma_.array().square() + alpha);
}

DenseOperator::DenseOperator(Matrix entries) : a_(std::move(entries)) {
  if (a_.rows() < 1 || a_.cols() < 1) throw std::invalid_argument("empty matrix");
  requireFinite(a_);
  norm_ = Eigen::BDCSVD<Matrix>(a_).singularValues()(0);
}

Vector DenseOperator::apply(const Vector& x) const {
  checkDomain(x);
  return a_ * x;
}

Vector DenseOperator::applyAdjoint(const Vector& y) const {
  checkRange(y);
  return a_.transpose() * y;
}

const Matrix& DenseOperator::normalMatrix() const {
  std::call_once(normal_once_, [this] { normal_ = a_.transpose() * a_; });
  return normal_;
}

Vector DenseOperator::solveShiftedNormal(const Vector& rhs, double alpha) const {
  checkDomain(rhs);
  if (!(alpha > 0.0)) throw std::invalid_argument("shift alpha must be positive");
  Matrix shifted = normalMatrix();
  shifted.diagonal().array() += alpha;
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("shifted normal system not positive definite");
  return llt.solve(rhs);
}

SvdDecomposition svd(const DenseOperator& op) {
  Eigen::BDCSVD<Matrix> dec(op.entries(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw std::runtime_error("SVD failed to converge");
  return SvdDecomposition{dec.singularValues(), dec.matrixU(), dec.matrixV()};
}

DenseOperator toDense(const DiagonalOperator& op) {
  Matrix a = Matrix::Zero(op.rows(), op.cols());
  a.diagonal() = op.singularValues();
  return DenseOperator(std::move(a));
}

SpectralProblem spectralForm(const DiagonalOperator& op, const Vector& y) {
  if (y.size() != op.rows()) throw DimensionError("data length does not match operator");
  SpectralProblem sp;
  sp.lambda = op.singularValues().array().square();
  sp.y_coeff = y;
  sp.op_norm = op.operatorNorm();
  return sp;
}

SpectralProblem spectralForm(const DenseOperator& op, const Vector& y) {
  if (y.size() != op.rows()) throw DimensionError("data length does not match operator");
  SvdDecomposition dec = svd(op);
  SpectralProblem sp;
  sp.lambda = dec.singular_values.array().square();
  sp.y_coeff = dec.left_vectors.transpose() * y;
  sp.op_norm = dec.singular_values.size() > 0 ? dec.singular_values(0) : 0.0;
  return sp;
}

SpectralProblem spectralForm(const LinearOperator& op, const Vector& y) {
  if (const auto* d = dynamic_cast<const DiagonalOperator*>(&op)) return spectralForm(*d, y);
  if (const auto* m = dynamic_cast<const DenseOperator*>(&op)) return spectralForm(*m, y);
  throw std::invalid_argument("spectral form requires a diagonal or dense operator");
}

CanonicalProblem canonicalProblem(const SpectralProblem& sp) {
  if (sp.lambda.size() != sp.y_coeff.size())
    throw std::invalid_argument("spectral problem arrays must have equal length");
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(sp.lambda.size()));
  double out_sq = 0.0;
  for (Eigen::Index i = 0; i < sp.lambda.size(); ++i) {
    if (sp.lambda[i] > 0.0)
      order.push_back(i);
    else
      out_sq += sp.y_coeff[i] * sp.y_coeff[i];
  }
  if (order.empty()) throw std::invalid_argument("spectral problem has no positive eigenvalues");
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return sp.lambda[a] > sp.lambda[b]; });
  const auto n = static_cast<Eigen::Index>(order.size());
  Vector sigma(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sigma[i] = std::sqrt(sp.lambda[order[static_cast<std::size_t>(i)]]);
    y[i] = sp.y_coeff[order[static_cast<std::size_t>(i)]];
  }
  CanonicalProblem cp;
  cp.op = std::make_shared<DiagonalOperator>(std::move(sigma));
  cp.y = std::move(y);
  cp.out_of_range_mass = std::sqrt(out_sq);
  return cp;
}

}  // namespace ratreg
