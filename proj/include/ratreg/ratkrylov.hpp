#pragma once

#include "ratreg/classical.hpp"
#include "ratreg/linop.hpp"

#include <string>
#include <vector>

namespace ratreg {

enum class BasisKind { TikhonovSolution, KrylovPower };

/// Explicit basis of an approximation space together with the cached images
/// A b_i. Aggregation order: x_{alpha_1}, ..., x_{alpha_n}. Mixed order:
/// ytilde, x_{alpha_1}, (A*A) ytilde, x_{alpha_2}, ... with ytilde = A*y.
struct RationalBasis {
  std::vector<Vector> vectors;
  std::vector<BasisKind> kinds;
  std::vector<int> kind_index;  // alpha index (1-based) or Krylov power j >= 0
  std::vector<Vector> images;
};

RationalBasis buildAggregationBasis(const LinearOperator& op, const Vector& y_noisy,
                                    const AlphaSchedule& schedule, int n);
RationalBasis buildRatCgBasis(const LinearOperator& op, const Vector& y_noisy,
                              const AlphaSchedule& schedule, int n);

enum class SolvePath { Gram, Qr, Factorized };

std::string toString(SolvePath path);
SolvePath solvePathFromString(const std::string& name);

struct AggregationResult {
  Vector x;
  Vector coefficients;  // per basis vector; empty for the factorized path
  double residual_norm = 0.0;
  int effective_rank = 0;
  SolvePath path = SolvePath::Qr;
  bool breakdown = false;  // numerical rank fell short of n (or CGNE broke down)
};

/// Least squares for ||A x - y|| over the span of the first n Tikhonov
/// solutions. The gram path mirrors the normal equations G c = z with
/// G_ij = <A x_{alpha_i}, A x_{alpha_j}>, z_i = <x_{alpha_i}, A* y>; the qr
/// path is a rank-revealing orthogonal factorization of the image columns.
/// Near-singular systems are truncated to numerical rank with minimum-norm
/// coefficients; this is recorded, not an error.
AggregationResult aggregate(const LinearOperator& op, const Vector& y_noisy,
                            const AlphaSchedule& schedule, int n, SolvePath path = SolvePath::Qr);

/// Same minimization over the mixed space with floor(n/2) Tikhonov solutions
/// interleaved with ceil(n/2) Krylov powers (A*A)^j A*y.
AggregationResult ratcg(const LinearOperator& op, const Vector& y_noisy,
                        const AlphaSchedule& schedule, int n, SolvePath path = SolvePath::Qr);

/// Product-form computation: n iterated Tikhonov steps, then n CGNE steps
/// applied to the residual y-hat^(n), added back onto x^it_n. Equals the
/// direct least-squares solution whenever the space has full rank.
AggregationResult factorizedAggregate(const LinearOperator& op, const Vector& y_noisy,
                                      const AlphaSchedule& schedule, int n,
                                      bool reorthogonalize = true);

/// Product form for the mixed space: floor(n/2) Tikhonov steps, n CGNE steps.
AggregationResult factorizedRatCg(const LinearOperator& op, const Vector& y_noisy,
                                  const AlphaSchedule& schedule, int n,
                                  bool reorthogonalize = true);

/// Numerical rank of the image column set via column-pivoted orthogonal
/// factorization with relative threshold tol; the break-down index estimate
/// is rank + 1.
int detectBreakdown(const RationalBasis& basis, double tol = 1e-10);

}  // namespace ratreg
