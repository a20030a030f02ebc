#pragma once

#include "ratreg/classical.hpp"
#include "ratreg/linop.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ratreg {

/// Raised when a requested polynomial degree exceeds the number of points of
/// increase of the measure (or the measure carries no mass at all).
class DegenerateMeasureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Discrete spectral measure d-beta^(n): atoms at the distinct eigenvalues
/// lambda_i = sigma_i^2 with weights lambda * g^(n)(lambda)^2 * mass(lambda),
/// where mass(lambda) collects |<y, u_i>|^2 over coinciding eigenvalues.
struct DiscreteMeasure {
  Vector nodes;      // ascending, distinct, positive
  Vector weights;    // >= 0
  Vector data_mass;  // mass(lambda) = sum of squared data coefficients per node
  int kappa = 0;     // nodes carrying weight > 1e-14 * max weight
  double total_mass = 0.0;
};

DiscreteMeasure residualMeasure(const SpectralProblem& problem, const AlphaSchedule& schedule,
                                int n, bool hatted);

/// Orthogonal polynomial over a discrete measure, normalized to p(0) = 1,
/// held as its Jacobi recurrence, its roots, and its values on the measure
/// nodes. Evaluation anywhere uses the factored form prod(1 - x/root).
struct ResidualPolynomial {
  int degree = 0;
  std::vector<double> jacobi_a;  // diagonal recurrence coefficients, length degree
  std::vector<double> jacobi_b;  // off-diagonal, length degree-1
  Vector roots;                  // ascending, inside (0, max node]
  double value_at_zero_normalizer = 0.0;  // orthonormal-polynomial value at 0
  Vector node_values;                     // normalized values on the measure nodes

  double operator()(double x) const;
  /// p'(0) = -sum_j 1/root_j.
  double derivativeAtZero() const;
};

/// Stieltjes/Lanczos procedure with full reorthogonalization; returns the
/// normalized polynomials of degree 1..k_max. Requires k_max <= kappa.
std::vector<ResidualPolynomial> orthonormalResidualPolys(const DiscreteMeasure& measure,
                                                         int k_max);

/// Roots from the symmetric tridiagonal Jacobi matrix of the recurrence.
Vector polyRoots(const ResidualPolynomial& p);

/// w-hat_{n-1}(x) = (p_{n-1}(x) - p_n(x)) / x in monomial coordinates, with
/// pi_{n-1} = w-hat(0) and the smallest real root. Degree-capped at 12.
struct WPolynomial {
  int degree = 0;
  Vector coefficients;       // ascending powers, length degree + 1
  double pi_value = 0.0;     // w(0), equals p'_{n-1}(0) - p'_n(0)
  double pi_root_sum = 0.0;  // the same value from the root-sum formula
  Vector roots;              // real parts, ascending
  double smallest_root = 0.0;
  double max_imag_residue = 0.0;  // largest |imag| over the companion eigenvalues
};

WPolynomial wPolynomial(const ResidualPolynomial& p_prev, const ResidualPolynomial& p_curr);

struct CheckItem {
  std::string name;
  bool pass = true;
  bool skipped = false;
  double margin = 0.0;  // signed relative slack, >= 0 means satisfied
  std::string note;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool allPass() const;
  int failures() const;
  int skips() const;
};

/// Numerical verification of the root lemmata for 2 <= n <= n_max:
/// (a) within-measure interlacing, (b) cross-measure root monotonicity,
/// (c) the smallest-root bounds against mu_1^{(n-1)}, (d) the e^2 bound,
/// (e) lambda_{1,k} >= |p_k'(0)|^{-1}. Degenerate levels are reported as
/// skipped.
CheckReport checkRootLemmas(const SpectralProblem& problem, const AlphaSchedule& schedule,
                            int n_max, bool hatted = false);

/// Dual computation of the energy identity at level n: the node-sum of
/// ||A w-hat_{n-1}(AA*) g^(n-1)(AA*) y||^2 against
/// pi_{n-1} (rho_{n-1}^2 - rho_n^2) + factor * ||A*(A x_n - y)||^2 with the
/// solver supplying the right-hand side. factor is alpha_n^{-2} for the
/// aggregation method; alpha_k^{-2} (n = 2k) or 0 (n odd) for RatCG.
CheckReport checkEnergyIdentity(const SpectralProblem& problem, const AlphaSchedule& schedule,
                                int n, bool hatted);

/// Componentwise reconstruction of the solver residual from p_n^{[n]} and
/// g^(n), plus the optimality test against random competitor polynomials in
/// P_1^n and the fixed competitor (1 - lambda/||A||^2)^n.
CheckReport verifyResidualFactorization(const SpectralProblem& problem,
                                        const AlphaSchedule& schedule, int n, bool hatted = false,
                                        int competitors = 50, std::uint64_t seed = 0);

/// Pointwise bounds of the residual-polynomial lemma on [0, lambda_{1,k}]:
/// |p| <= 1, convex-quotient bound 0 <= (1-p)/x <= |p'(0)|, the weighted
/// bound p^2 lambda_1/(lambda_1 - x) <= 1, and its x^nu variant with
/// c_nu = nu^nu for each requested nu.
CheckReport checkPolynomialInequalities(const ResidualPolynomial& p,
                                        const std::vector<double>& nus, int grid_points = 100);

}  // namespace ratreg
