#pragma once

#include "ratreg/linop.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ratreg {

/// Ordered regularization parameters alpha_1, ..., alpha_N, all positive and
/// pairwise distinct. When a uniform lower bound c0 > 0 is supplied the
/// schedule additionally enforces alpha_i >= c0 (theorem mode), and when a
/// c_it bound is supplied it enforces 1/alpha_n <= c_it * sigma_{n-1} for all
/// n >= 2.
class AlphaSchedule {
public:
  explicit AlphaSchedule(std::vector<double> alphas, double c0 = 0.0,
                         std::optional<double> c_it = std::nullopt);

  int size() const { return static_cast<int>(alphas_.size()); }
  /// alpha_n, 1-based.
  double alpha(int n) const;
  const std::vector<double>& alphas() const { return alphas_; }
  double c0() const { return c0_; }
  std::optional<double> cIt() const { return c_it_; }

  /// sigma_n = sum_{k=1}^n 1/alpha_k.
  double sigma(int n) const;
  /// sigma-hat_n = sigma_{floor(n/2)}; valid whenever floor(n/2) <= size().
  double sigmaHat(int n) const;
  /// g^(n)(lambda) = prod_{i=1}^n (lambda/alpha_i + 1)^{-1}.
  double evalG(int n, double lambda) const;
  /// g-hat^(n) = g^(floor(n/2)).
  double evalGHat(int n, double lambda) const;

  /// Smallest c satisfying 1/alpha_n <= c * sigma_{n-1} over n = 2..size().
  double achievedCIt() const;

private:
  std::vector<double> alphas_;
  std::vector<double> sigma_prefix_;  // sigma_prefix_[n] = sigma_n, index 0 = 0
  double c0_ = 0.0;
  std::optional<double> c_it_;
};

/// Per-iteration record of a solver run. residual_norms[n] is
/// rho_n = ||A x_n - y^delta|| with the extension x_0 := 0, so
/// residual_norms[0] = ||y^delta||.
struct SolveTrace {
  std::vector<Vector> iterates;        // optional retention, iterate n at [n-1]
  std::vector<double> residual_norms;  // rho_0, rho_1, ...
  std::vector<double> sigma_values;    // sigma_n aligned with residual index n (0 at n=0)
  std::optional<int> stop_index;       // discrepancy index n*
  std::optional<int> breakdown_index;  // n_bd estimate
  std::string method_tag;
};

/// Tikhonov solution x_alpha = (A*A + alpha I)^{-1} A* y.
Vector tikhonov(const LinearOperator& op, const Vector& y_noisy, double alpha);

struct IteratedTikhonovResult {
  std::vector<Vector> iterates;   // x^it_1 .. x^it_n
  std::vector<Vector> residuals;  // y-hat^(k) = y^delta - A x^it_k
};

/// Iterated Tikhonov with variable parameters:
/// (A*A + alpha_n I) x_n = alpha_n x_{n-1} + A* y^delta, x_0 = 0.
IteratedTikhonovResult iteratedTikhonov(const LinearOperator& op, const Vector& y_noisy,
                                        const AlphaSchedule& schedule, int n);

struct CgneOptions {
  int max_iter = 100;
  std::optional<double> target_residual;  // stop once ||r|| < target
  bool reorthogonalize = false;           // full reorthogonalization of the A*r directions
  bool keep_iterates = false;
  double breakdown_rel_tol = 1e-13;  // stop when ||A*r|| <= tol * ||A*rhs||
};

struct CgneOutcome {
  Vector x;
  SolveTrace trace;
  bool broke_down = false;
};

/// CG for the normal equations, minimizing ||A x - rhs|| over the Krylov
/// space span{A*rhs, (A*A)A*rhs, ...}. Breakdown is a recorded outcome.
CgneOutcome cgne(const LinearOperator& op, const Vector& rhs, const CgneOptions& options = {});

/// Free-function forms of the schedule-derived quantities.
double evalG(const AlphaSchedule& schedule, int n, double lambda);
double evalGHat(const AlphaSchedule& schedule, int n, double lambda);
double sigmaSum(const AlphaSchedule& schedule, int n);
double sigmaHatSum(const AlphaSchedule& schedule, int n);

struct HankeGroetschReport {
  double nu = 0.0;
  int n = 0;
  double sup_value = 0.0;  // max over the grid of |g^(n)(l) l^nu| * sigma_n^nu
  double sigma_n = 0.0;
  bool finite = false;
};

/// Empirical check of the iterated-Tikhonov filter bound: reports the grid
/// supremum of |g^(n)(lambda) lambda^nu| * sigma_n^nu. Requires 0 <= nu < n.
HankeGroetschReport checkHankeGroetsch(const AlphaSchedule& schedule, int n, double nu,
                                       const std::vector<double>& grid);

}  // namespace ratreg
