#include "ratreg/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ratreg {

AlphaSchedule::AlphaSchedule(std::vector<double> alphas, double c0, std::optional<double> c_it)
    : alphas_(std::move(alphas)), c0_(c0), c_it_(c_it) {
  if (alphas_.empty()) throw std::invalid_argument("schedule must contain at least one alpha");
  for (double a : alphas_) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument("regularization parameters must be positive and finite");
  }
  std::vector<double> sorted = alphas_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1])
      throw std::invalid_argument("regularization parameters must be pairwise distinct");
  }
  if (c0_ > 0.0) {
    for (double a : alphas_) {
      if (a < c0_) throw std::invalid_argument("schedule violates the lower bound alpha_i >= c0");
    }
  }
  sigma_prefix_.resize(alphas_.size() + 1, 0.0);
  for (std::size_t i = 0; i < alphas_.size(); ++i)
    sigma_prefix_[i + 1] = sigma_prefix_[i] + 1.0 / alphas_[i];
  if (c_it_) {
    for (std::size_t n = 2; n <= alphas_.size(); ++n) {
      if (1.0 / alphas_[n - 1] > *c_it_ * sigma_prefix_[n - 1] * (1.0 + 1e-12))
        throw std::invalid_argument("schedule violates 1/alpha_n <= c_it * sigma_{n-1}");
    }
  }
}

double AlphaSchedule::alpha(int n) const {
  if (n < 1 || n > size()) throw std::out_of_range("alpha index outside schedule");
  return alphas_[static_cast<std::size_t>(n - 1)];
}

double AlphaSchedule::sigma(int n) const {
  if (n < 0 || n > size()) throw std::out_of_range("sigma index outside schedule");
  return sigma_prefix_[static_cast<std::size_t>(n)];
}

double AlphaSchedule::sigmaHat(int n) const {
  if (n < 0) throw std::out_of_range("sigma index outside schedule");
  return sigma(n / 2);
}

double AlphaSchedule::evalG(int n, double lambda) const {
  if (n < 0 || n > size()) throw std::out_of_range("g index outside schedule");
  if (lambda < 0.0) throw std::invalid_argument("g is evaluated on lambda >= 0");
  double denom = 1.0;
  for (int i = 0; i < n; ++i) denom *= lambda / alphas_[static_cast<std::size_t>(i)] + 1.0;
  return 1.0 / denom;
}

double AlphaSchedule::evalGHat(int n, double lambda) const {
  if (n < 0) throw std::out_of_range("g index outside schedule");
  return evalG(n / 2, lambda);
}

double AlphaSchedule::achievedCIt() const {
  double c = 0.0;
  for (int n = 2; n <= size(); ++n)
    c = std::max(c, 1.0 / (alphas_[static_cast<std::size_t>(n - 1)] * sigma(n - 1)));
  return c;
}

Vector tikhonov(const LinearOperator& op, const Vector& y_noisy, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return op.solveShiftedNormal(op.applyAdjoint(y_noisy), alpha);
}

IteratedTikhonovResult iteratedTikhonov(const LinearOperator& op, const Vector& y_noisy,
                                        const AlphaSchedule& schedule, int n) {
  if (n < 0 || n > schedule.size())
    throw std::out_of_range("iteration count exceeds schedule length");
  IteratedTikhonovResult out;
  out.iterates.reserve(static_cast<std::size_t>(n));
  out.residuals.reserve(static_cast<std::size_t>(n));
  const Vector ytilde = op.applyAdjoint(y_noisy);
  Vector x = Vector::Zero(op.cols());
  for (int k = 1; k <= n; ++k) {
    const double a = schedule.alpha(k);
    x = op.solveShiftedNormal(a * x + ytilde, a);
    out.iterates.push_back(x);
    out.residuals.push_back(y_noisy - op.apply(x));
  }
  return out;
}

CgneOutcome cgne(const LinearOperator& op, const Vector& rhs, const CgneOptions& options) {
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

  CgneOutcome out;
  out.trace.method_tag = "cgne";
  out.x = Vector::Zero(op.cols());

  Vector r = rhs;  // data-space residual rhs - A x
  out.trace.residual_norms.push_back(r.norm());

  Vector s = op.applyAdjoint(r);  // normal-equation residual
  const double s0_norm = s.norm();
  if (s0_norm == 0.0 || out.trace.residual_norms[0] == 0.0) {
    // rhs == 0 (or rhs orthogonal to the range): x = 0 is already optimal.
    out.broke_down = true;
    out.trace.breakdown_index = 1;
    return out;
  }

  std::vector<Vector> s_basis;  // normalized history for reorthogonalization
  if (options.reorthogonalize) s_basis.push_back(s / s0_norm);

  Vector p = s;
  double gamma = s.squaredNorm();

  for (int k = 1; k <= options.max_iter; ++k) {
    const Vector q = op.apply(p);
    const double qq = q.squaredNorm();
    if (qq == 0.0) {
      out.broke_down = true;
      out.trace.breakdown_index = k;
      break;
    }
    const double theta = gamma / qq;
    out.x += theta * p;
    r -= theta * q;
    out.trace.residual_norms.push_back(r.norm());
    if (options.keep_iterates) out.trace.iterates.push_back(out.x);

    if (options.target_residual && r.norm() < *options.target_residual) {
      out.trace.stop_index = k;
      break;
    }

    s = op.applyAdjoint(r);
    if (options.reorthogonalize) {
      for (int pass = 0; pass < 2; ++pass)
        for (const Vector& b : s_basis) s -= b.dot(s) * b;
    }
    const double gamma_next = s.squaredNorm();
    if (std::sqrt(gamma_next) <= options.breakdown_rel_tol * s0_norm) {
      out.broke_down = true;
      out.trace.breakdown_index = k + 1;
      break;
    }
    if (options.reorthogonalize) s_basis.push_back(s / std::sqrt(gamma_next));
    p = s + (gamma_next / gamma) * p;
    gamma = gamma_next;
  }
  return out;
}

double evalG(const AlphaSchedule& schedule, int n, double lambda) { return schedule.evalG(n, lambda); }
double evalGHat(const AlphaSchedule& schedule, int n, double lambda) {
  return schedule.evalGHat(n, lambda);
}
double sigmaSum(const AlphaSchedule& schedule, int n) { return schedule.sigma(n); }
double sigmaHatSum(const AlphaSchedule& schedule, int n) { return schedule.sigmaHat(n); }

HankeGroetschReport checkHankeGroetsch(const AlphaSchedule& schedule, int n, double nu,
                                       const std::vector<double>& grid) {
  // nu = n is admitted: the single-factor example lives on that boundary and
  // stays finite on any bounded grid.
  if (nu < 0.0 || nu > static_cast<double>(n))
    throw std::invalid_argument("the filter bound requires 0 <= nu <= n");
  HankeGroetschReport report;
  report.nu = nu;
  report.n = n;
  report.sigma_n = schedule.sigma(n);
  double sup = 0.0;
  for (double lambda : grid) {
    const double v = std::abs(schedule.evalG(n, lambda) * std::pow(lambda, nu));
    sup = std::max(sup, v);
  }
  report.sup_value = sup * std::pow(report.sigma_n, nu);
  report.finite = std::isfinite(report.sup_value);
  return report;
}

}  // namespace ratreg
